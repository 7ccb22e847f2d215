"""Triangular fuzzy numbers, alpha-cuts and endpoint interval arithmetic.

Two arithmetic modes are provided for multiplication and division:

``limit``
    The endpoint rules obtained as the limits of the m-parameterisation of an
    interval (only the lo/lo and hi/hi products, or lo/hi and hi/lo quotients,
    are compared).  This is the default.
``standard``
    Classical interval arithmetic (min/max over all four endpoint
    combinations).  Inclusion isotonic; used for enclosure checks.

The two modes agree whenever both operands are nonnegative, which is the
case for every quantity of the moving-plate problem.

The ``_*_bounds`` kernels take raw endpoints and work elementwise on numpy
arrays as well as on floats; the solvers use them directly on whole fields.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

import numpy as np

from .errors import DomainError, ValidationError

MODES = ("limit", "standard")


def _check_mode(mode):
    if mode not in MODES:
        raise ValueError(f"unknown arithmetic mode {mode!r}; expected one of {MODES}")


@dataclass(frozen=True)
class Interval:
    """Closed real interval ``[lo, hi]``."""

    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if not lo <= hi:
            raise ValidationError(f"interval bounds out of order: [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, x: float) -> "Interval":
        return cls(x, x)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def is_degenerate(self) -> bool:
        return self.lo == self.hi

    def contains(self, other: "Interval | float", rtol: float = 0.0) -> bool:
        """Containment test with slack ``rtol * max(|bounds|)``."""
        if not isinstance(other, Interval):
            other = Interval.point(other)
        slack = rtol * max(abs(self.lo), abs(self.hi), abs(other.lo), abs(other.hi))
        return self.lo - slack <= other.lo and other.hi <= self.hi + slack

    def __contains__(self, x):
        return self.contains(x)

    def __add__(self, other):
        return iv_add(self, _coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return iv_sub(self, _coerce(other))

    def __rsub__(self, other):
        return iv_sub(_coerce(other), self)

    def __mul__(self, other):
        return iv_mul(self, _coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return iv_div(self, _coerce(other))

    def __rtruediv__(self, other):
        return iv_div(_coerce(other), self)

    def __repr__(self):
        return f"Interval({self.lo!r}, {self.hi!r})"


def _coerce(x) -> Interval:
    return x if isinstance(x, Interval) else Interval.point(x)


# -- endpoint kernels (float or ndarray) ------------------------------------

def _add_bounds(alo, ahi, blo, bhi):
    return alo + blo, ahi + bhi


def _sub_bounds(alo, ahi, blo, bhi):
    return alo - bhi, ahi - blo


def _mul_bounds(alo, ahi, blo, bhi, mode="limit"):
    if mode == "limit":
        p, q = alo * blo, ahi * bhi
        return np.minimum(p, q), np.maximum(p, q)
    p1, p2, p3, p4 = alo * blo, alo * bhi, ahi * blo, ahi * bhi
    return (np.minimum(np.minimum(p1, p2), np.minimum(p3, p4)),
            np.maximum(np.maximum(p1, p2), np.maximum(p3, p4)))


def _div_bounds(alo, ahi, blo, bhi, mode="limit"):
    if np.any((np.asarray(blo) <= 0) & (np.asarray(bhi) >= 0)):
        raise DomainError("divisor interval contains zero")
    if mode == "limit":
        p, q = alo / bhi, ahi / blo
        return np.minimum(p, q), np.maximum(p, q)
    q1, q2, q3, q4 = alo / blo, alo / bhi, ahi / blo, ahi / bhi
    return (np.minimum(np.minimum(q1, q2), np.minimum(q3, q4)),
            np.maximum(np.maximum(q1, q2), np.maximum(q3, q4)))


# -- scalar interval operations ---------------------------------------------

def iv_add(a: Interval, b: Interval) -> Interval:
    return Interval(*_add_bounds(a.lo, a.hi, b.lo, b.hi))


def iv_sub(a: Interval, b: Interval) -> Interval:
    return Interval(*_sub_bounds(a.lo, a.hi, b.lo, b.hi))


def iv_mul(a: Interval, b: Interval, mode: str = "limit") -> Interval:
    """Interval product.

    In ``limit`` mode only ``a.lo*b.lo`` and ``a.hi*b.hi`` are compared, so
    mixed-sign operands give a narrower (non-enclosing) result than
    ``standard`` mode: ``[-1,2]*[3,4]`` is ``[-3,8]`` versus ``[-4,8]``.
    """
    _check_mode(mode)
    return Interval(*_mul_bounds(a.lo, a.hi, b.lo, b.hi, mode))


def iv_div(a: Interval, b: Interval, mode: str = "limit") -> Interval:
    """Interval quotient; raises :class:`DomainError` if ``0 in b``."""
    _check_mode(mode)
    return Interval(*_div_bounds(a.lo, a.hi, b.lo, b.hi, mode))


def width(a: Interval) -> float:
    return a.hi - a.lo


def hull(*intervals: Interval) -> Interval:
    return Interval(min(i.lo for i in intervals), max(i.hi for i in intervals))


# -- fuzzy numbers -----------------------------------------------------------

@dataclass(frozen=True)
class TriangularFuzzyNumber:
    """Triangular fuzzy number ``[left, nominal, right]``."""

    left: float
    nominal: float
    right: float

    def __post_init__(self):
        vals = [float(v) for v in (self.left, self.nominal, self.right)]
        if not (np.all(np.isfinite(vals)) and vals[0] <= vals[1] <= vals[2]):
            raise ValidationError(
                f"triangular fuzzy number needs left <= nominal <= right, got {vals}")
        for name, v in zip(("left", "nominal", "right"), vals):
            object.__setattr__(self, name, v)

    @classmethod
    def crisp(cls, x: float) -> "TriangularFuzzyNumber":
        return cls(x, x, x)

    @property
    def is_crisp(self) -> bool:
        return self.left == self.right

    @property
    def support(self) -> Interval:
        return Interval(self.left, self.right)

    def scaled_spread(self, factor: float) -> "TriangularFuzzyNumber":
        """Same nominal, left/right spreads multiplied by ``factor``."""
        n = self.nominal
        return TriangularFuzzyNumber(n - factor * (n - self.left), n,
                                     n + factor * (self.right - n))

    def as_list(self) -> list[float]:
        return [self.left, self.nominal, self.right]


def membership(f: TriangularFuzzyNumber, x: float) -> float:
    if x < f.left or x > f.right:
        return 0.0
    if x == f.nominal:
        return 1.0
    if x < f.nominal:
        return (x - f.left) / (f.nominal - f.left)
    return (f.right - x) / (f.right - f.nominal)


def alpha_cut(f: TriangularFuzzyNumber, alpha: float) -> Interval:
    if not 0.0 <= alpha <= 1.0:
        raise ValidationError(f"alpha must lie in [0, 1], got {alpha}")
    lo = f.left + (f.nominal - f.left) * alpha
    hi = f.right - (f.right - f.nominal) * alpha
    # rounding can push the core bounds past the nominal value
    return Interval(min(lo, f.nominal), max(hi, f.nominal))


@dataclass(frozen=True)
class AlphaLevels:
    """Strictly increasing membership levels in ``[0, 1]`` ending at 1."""

    levels: tuple[float, ...] = field(default_factory=lambda: AlphaLevels.uniform(11).levels)

    def __post_init__(self):
        levels = tuple(float(a) for a in self.levels)
        if not levels:
            raise ValidationError("at least one alpha level is required")
        if any(not 0.0 <= a <= 1.0 for a in levels):
            raise ValidationError(f"alpha levels must lie in [0, 1]: {levels}")
        if any(b <= a for a, b in zip(levels, levels[1:])):
            raise ValidationError(f"alpha levels must be strictly increasing: {levels}")
        if levels[-1] != 1.0:
            raise ValidationError("alpha levels must include 1 (the crisp core)")
        object.__setattr__(self, "levels", levels)

    @classmethod
    def uniform(cls, n: int = 11) -> "AlphaLevels":
        if n < 1:
            raise ValidationError("need at least one alpha level")
        if n == 1:
            return cls((1.0,))
        return cls(tuple(i / (n - 1) for i in range(n)))

    def __iter__(self) -> Iterator[float]:
        return iter(self.levels)

    def __len__(self):
        return len(self.levels)


class FuzzyScalar:
    """Alpha-cut stack of a fuzzy quantity, checked for nesting."""

    def __init__(self, cuts: Mapping[float, Interval]):
        items = sorted((float(a), iv) for a, iv in cuts.items())
        for (a1, c1), (a2, c2) in zip(items, items[1:]):
            if not c1.contains(c2):
                raise ValidationError(f"cut at alpha={a2} is not nested in cut at alpha={a1}")
        self._cuts = dict(items)

    @property
    def cuts(self) -> dict[float, Interval]:
        return dict(self._cuts)

    @property
    def levels(self) -> tuple[float, ...]:
        return tuple(self._cuts)

    def __getitem__(self, alpha: float) -> Interval:
        return self._cuts[alpha]

    def __eq__(self, other):
        return isinstance(other, FuzzyScalar) and self._cuts == other._cuts

    def __repr__(self):
        return f"FuzzyScalar({self._cuts!r})"


def fuzzify(f: TriangularFuzzyNumber, levels: AlphaLevels | Iterable[float]) -> FuzzyScalar:
    if not isinstance(levels, AlphaLevels):
        levels = AlphaLevels(tuple(levels))
    return FuzzyScalar({a: alpha_cut(f, a) for a in levels})
