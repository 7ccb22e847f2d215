"""Explicit FTCS marching for the suddenly accelerated plate.

The problem is solved on the normalised domain ``y_hat = y/h`` in [0, 1], so
the plate spacing only enters through the coefficient ``nu/h**2`` and the
grid stays crisp even when ``h`` is fuzzy.  The diffusion number is

    d = (nu / h**2) * dt / dy_hat**2

Fields are stored as ``(n_times, n_nodes)`` arrays; interval fields carry a
``lo`` and a ``hi`` array.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from . import fuzzy
from .errors import InstabilityError, ValidationError
from .fuzzy import AlphaLevels, Interval, TriangularFuzzyNumber

PARAMETERS = ("nu", "h", "u0")
PROPAGATION_MODES = ("monotone", "naive")
RECORD_TIMES = (0.18, 0.36, 0.54, 0.72, 0.90, 1.08)
DEFAULT_NODES = 41
DEFAULT_D_MAX = 0.45
STABILITY_LIMIT = 0.5


@dataclass(frozen=True)
class PhysicalParams:
    """Crisp parameters in SI units: nu [m^2/s], h [m], u0 [m/s]."""

    nu: float
    h: float
    u0: float

    def __post_init__(self):
        if not self.nu > 0:
            raise ValidationError("kinematic viscosity must be positive", "nu")
        if not self.h > 0:
            raise ValidationError("plate spacing must be positive", "h")
        if not self.u0 >= 0:
            raise ValidationError("wall speed must be nonnegative", "u0")

    @property
    def coefficient(self) -> float:
        """``nu/h**2`` in 1/s."""
        return self.nu / (self.h * self.h)


@dataclass(frozen=True)
class IntervalParams:
    nu: Interval
    h: Interval
    u0: Interval

    def __post_init__(self):
        if not self.nu.lo > 0:
            raise ValidationError("kinematic viscosity interval must be positive", "nu")
        if not self.h.lo > 0:
            raise ValidationError("plate spacing interval must be positive", "h")
        if not self.u0.lo >= 0:
            raise ValidationError("wall speed interval must be nonnegative", "u0")

    @classmethod
    def from_crisp(cls, p: PhysicalParams) -> "IntervalParams":
        return cls(Interval.point(p.nu), Interval.point(p.h), Interval.point(p.u0))

    def coefficient(self, arithmetic: str = "limit") -> Interval:
        return fuzzy.iv_div(self.nu, fuzzy.iv_mul(self.h, self.h, arithmetic), arithmetic)

    def vertices(self) -> list[PhysicalParams]:
        los = [getattr(self, k).lo for k in PARAMETERS]
        his = [getattr(self, k).hi for k in PARAMETERS]
        out = []
        for mask in range(8):
            vals = [his[i] if mask >> i & 1 else los[i] for i in range(3)]
            out.append(PhysicalParams(*vals))
        return out


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid on ``y_hat`` in [0, 1] with ``nodes`` points and time step ``dt`` [s]."""

    nodes: int = DEFAULT_NODES
    dt: float = 1e-3
    record_times: tuple[float, ...] = RECORD_TIMES

    def __post_init__(self):
        if int(self.nodes) != self.nodes or self.nodes < 3:
            raise ValidationError(f"need an integer node count >= 3, got {self.nodes}", "grid.nodes")
        if not self.dt > 0:
            raise ValidationError("time step must be positive", "grid.dt")
        times = tuple(float(t) for t in self.record_times)
        if any(t < 0 for t in times):
            raise ValidationError("record times must be nonnegative", "grid.record_times")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValidationError("record times must be strictly increasing", "grid.record_times")
        for t in times:
            n = round(t / self.dt)
            if abs(t - n * self.dt) > 1e-9 * max(t, self.dt):
                raise ValidationError(
                    f"record time {t} s is not a multiple of dt = {self.dt} s", "grid.record_times")
        object.__setattr__(self, "nodes", int(self.nodes))
        object.__setattr__(self, "dt", float(self.dt))
        object.__setattr__(self, "record_times", times)

    @property
    def dy(self) -> float:
        return 1.0 / (self.nodes - 1)

    @property
    def y(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.nodes)

    @property
    def record_steps(self) -> tuple[int, ...]:
        return tuple(round(t / self.dt) for t in self.record_times)

    def diffusion_number(self, coefficient: float) -> float:
        return coefficient * (self.dt / (self.dy * self.dy))


def auto_dt(coefficient_hi: float, nodes: int = DEFAULT_NODES,
            record_times: Sequence[float] = RECORD_TIMES,
            d_max: float = DEFAULT_D_MAX) -> float:
    """Largest ``base/k`` step with ``d <= d_max``, ``base`` the first positive record time.

    All record times must be multiples of ``base``.
    """
    if not 0 < d_max <= STABILITY_LIMIT:
        raise ValidationError(f"d_max must lie in (0, 0.5], got {d_max}", "grid.d_max")
    positive = [t for t in record_times if t > 0]
    if not positive:
        raise ValidationError("auto dt needs at least one positive record time", "grid.record_times")
    base = min(positive)
    dy = 1.0 / (nodes - 1)
    scale = coefficient_hi / (dy * dy)
    k = max(1, math.ceil(base * scale / d_max))
    while scale * (base / k) > d_max:
        k += 1
    return base / k


def grid_for(coefficient_hi: float, nodes: int = DEFAULT_NODES,
             record_times: Sequence[float] = RECORD_TIMES,
             d_max: float = DEFAULT_D_MAX) -> GridSpec:
    return GridSpec(nodes, auto_dt(coefficient_hi, nodes, record_times, d_max), tuple(record_times))


# -- fields ------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CrispField:
    times: tuple[float, ...]
    values: np.ndarray  # (n_times, n_nodes)

    @property
    def snapshots(self) -> dict[float, np.ndarray]:
        return {t: self.values[i] for i, t in enumerate(self.times)}

    def at(self, t: float) -> np.ndarray:
        return self.values[self.times.index(t)]


@dataclass(frozen=True, eq=False)
class IntervalField:
    times: tuple[float, ...]
    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        if self.lo.shape != self.hi.shape:
            raise ValueError("lo/hi shape mismatch")
        if np.any(self.lo > self.hi):
            raise ValidationError("interval field has lo > hi")

    @classmethod
    def from_crisp(cls, field: CrispField) -> "IntervalField":
        return cls(field.times, field.values.copy(), field.values.copy())

    @property
    def snapshots(self) -> dict[float, list[Interval]]:
        return {t: [Interval(a, b) for a, b in zip(self.lo[i], self.hi[i])]
                for i, t in enumerate(self.times)}

    @property
    def width(self) -> np.ndarray:
        return self.hi - self.lo

    def contains(self, other: "IntervalField | CrispField", rtol: float = 1e-12) -> bool:
        return self.containment_violation(other, rtol) == 0.0

    def containment_violation(self, other, rtol: float = 1e-12) -> float:
        """Largest amount by which ``other`` sticks out, after an ``rtol`` slack."""
        olo, ohi = _bounds_of(other)
        scale = max(np.max(np.abs(self.hi), initial=0.0), np.max(np.abs(ohi), initial=0.0))
        slack = rtol * scale
        out = np.maximum(self.lo - olo, ohi - self.hi) - slack
        return float(max(np.max(out, initial=0.0), 0.0))

    def hull(self, other) -> "IntervalField":
        olo, ohi = _bounds_of(other)
        return IntervalField(self.times, np.minimum(self.lo, olo), np.maximum(self.hi, ohi))


def _bounds_of(field):
    if isinstance(field, CrispField):
        return field.values, field.values
    return field.lo, field.hi


@dataclass(frozen=True, eq=False)
class FuzzyField:
    per_alpha: dict[float, IntervalField]

    @property
    def levels(self) -> tuple[float, ...]:
        return tuple(sorted(self.per_alpha))

    @property
    def core(self) -> IntervalField:
        return self.per_alpha[1.0]

    @property
    def times(self) -> tuple[float, ...]:
        return self.core.times

    def __getitem__(self, alpha: float) -> IntervalField:
        return self.per_alpha[alpha]


# -- crisp FTCS ---------------------------------------------------------------

def step_crisp(u: np.ndarray, d, wall: float | None = None) -> np.ndarray:
    """One FTCS step.  ``u`` may carry leading batch axes; ``d`` broadcasts over them."""
    u = np.asarray(u, dtype=float)
    if u.shape[-1] < 3:
        raise ValidationError("need at least three nodes")
    d = np.asarray(d, dtype=float)[..., None]
    new = np.empty_like(u)
    new[..., 1:-1] = u[..., 1:-1] + d * (u[..., 2:] - 2.0 * u[..., 1:-1] + u[..., :-2])
    new[..., 0] = u[..., 0] if wall is None else wall
    new[..., -1] = 0.0
    return new


def initial_profile(u0, nodes: int) -> np.ndarray:
    u0 = np.asarray(u0, dtype=float)
    u = np.zeros(u0.shape + (nodes,))
    u[..., 0] = u0
    return u


def march_crisp(u: np.ndarray, d, steps: Sequence[int]) -> np.ndarray:
    """March ``u`` and return snapshots at the given step counts, shape ``(len(steps), ...)``."""
    out = np.empty((len(steps),) + u.shape)
    n = 0
    for i, target in enumerate(steps):
        while n < target:
            u = step_crisp(u, d)
            n += 1
        out[i] = u
    return out


def _check_crisp_grid(d, allow_unstable):
    if np.max(d) > STABILITY_LIMIT and not allow_unstable:
        d_hi = float(np.max(d))
        raise InstabilityError(
            f"diffusion number d = {d_hi:.6g} exceeds {STABILITY_LIMIT}; reduce dt", d_hi=d_hi)


def solve_crisp(p: PhysicalParams, g: GridSpec, allow_unstable: bool = False) -> CrispField:
    d = g.diffusion_number(p.coefficient)
    _check_crisp_grid(d, allow_unstable)
    values = march_crisp(initial_profile(p.u0, g.nodes), d, g.record_steps)
    return CrispField(g.record_times, values)


def solve_crisp_batch(nu, h, u0, g: GridSpec, allow_unstable: bool = False) -> np.ndarray:
    """Vectorised crisp solves; returns ``(n_times, n_samples, n_nodes)``."""
    nu, h, u0 = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (nu, h, u0)))
    d = (nu / (h * h)) * (g.dt / (g.dy * g.dy))
    _check_crisp_grid(d, allow_unstable)
    return march_crisp(initial_profile(u0, g.nodes), d, g.record_steps)


# -- interval FTCS -------------------------------------------------------------

def _step_bounds(lo, hi, dlo, dhi, mode="monotone", arithmetic="limit"):
    """Interval FTCS step on endpoint arrays; boundary values are left untouched."""
    ul, uh = lo[1:-1], hi[1:-1]
    if mode == "monotone":
        # (1-2d) u_j + d (u_{j+1} + u_{j-1}) is nondecreasing in every u for
        # d <= 1/2 and linear in d, so the box image is reached at endpoints.
        sl = lo[2:] + lo[:-2]
        sh = hi[2:] + hi[:-2]
        new_lo = np.minimum((1.0 - 2.0 * dlo) * ul + dlo * sl, (1.0 - 2.0 * dhi) * ul + dhi * sl)
        new_hi = np.maximum((1.0 - 2.0 * dlo) * uh + dlo * sh, (1.0 - 2.0 * dhi) * uh + dhi * sh)
    elif mode == "naive":
        sl, sh = fuzzy._add_bounds(lo[2:], hi[2:], lo[:-2], hi[:-2])
        tl, th = fuzzy._mul_bounds(2.0, 2.0, ul, uh, arithmetic)
        ll, lh = fuzzy._sub_bounds(sl, sh, tl, th)
        ql, qh = fuzzy._mul_bounds(dlo, dhi, ll, lh, arithmetic)
        new_lo, new_hi = fuzzy._add_bounds(ul, uh, ql, qh)
    else:
        raise ValueError(f"unknown propagation mode {mode!r}; expected one of {PROPAGATION_MODES}")
    out_lo, out_hi = lo.copy(), hi.copy()
    out_lo[1:-1], out_hi[1:-1] = new_lo, new_hi
    return out_lo, out_hi


def step_interval(u: Sequence[Interval], d: Interval, mode: str = "monotone",
                  arithmetic: str = "limit", wall: Interval | None = None) -> list[Interval]:
    """One interval FTCS step.

    ``naive`` evaluates ``u_j + d*(u_{j+1} - 2u_j + u_{j-1})`` with interval
    arithmetic and suffers from the dependency problem.  ``monotone`` uses the
    regrouping ``(1-2d)u_j + d(u_{j+1} + u_{j-1})`` and returns the exact
    image of the input box; it needs ``d.hi <= 0.5``.
    """
    if not d.lo >= 0:
        raise ValidationError("diffusion number must be nonnegative")
    if mode == "monotone" and d.hi > STABILITY_LIMIT:
        raise InstabilityError(f"monotone mode needs d.hi <= 0.5, got {d.hi}", d_hi=d.hi)
    if len(u) < 3:
        raise ValidationError("need at least three nodes")
    lo = np.array([iv.lo for iv in u])
    hi = np.array([iv.hi for iv in u])
    lo, hi = _step_bounds(lo, hi, d.lo, d.hi, mode, arithmetic)
    if wall is not None:
        lo[0], hi[0] = wall.lo, wall.hi
    lo[-1] = hi[-1] = 0.0
    return [Interval(a, b) for a, b in zip(lo, hi)]


def interval_diffusion_number(p: IntervalParams, g: GridSpec, arithmetic: str = "limit") -> Interval:
    return fuzzy.iv_mul(p.coefficient(arithmetic), Interval.point(g.dt / (g.dy * g.dy)), arithmetic)


def solve_interval(p: IntervalParams, g: GridSpec, mode: str = "monotone",
                   arithmetic: str = "limit") -> IntervalField:
    if mode not in PROPAGATION_MODES:
        raise ValueError(f"unknown propagation mode {mode!r}; expected one of {PROPAGATION_MODES}")
    d = interval_diffusion_number(p, g, arithmetic)
    if d.hi > STABILITY_LIMIT:
        raise InstabilityError(
            f"interval diffusion number d = [{d.lo:.6g}, {d.hi:.6g}] exceeds {STABILITY_LIMIT}",
            d_hi=d.hi)
    lo = initial_profile(p.u0.lo, g.nodes)
    hi = initial_profile(p.u0.hi, g.nodes)
    steps = g.record_steps
    out_lo = np.empty((len(steps), g.nodes))
    out_hi = np.empty_like(out_lo)
    n = 0
    for i, target in enumerate(steps):
        while n < target:
            lo, hi = _step_bounds(lo, hi, d.lo, d.hi, mode, arithmetic)
            n += 1
        out_lo[i], out_hi[i] = lo, hi
    return IntervalField(g.record_times, out_lo, out_hi)


def interval_params_at(tfns: Mapping[str, TriangularFuzzyNumber], alpha: float) -> IntervalParams:
    return IntervalParams(*(fuzzy.alpha_cut(tfns[k], alpha) for k in PARAMETERS))


def solve_fuzzy(tfns: Mapping[str, TriangularFuzzyNumber], g: GridSpec,
                levels: AlphaLevels | None = None, mode: str = "monotone",
                arithmetic: str = "limit") -> FuzzyField:
    """Interval solve at every alpha level.

    Float rounding can break nesting by a few ulps, so each lower level is
    widened to the hull of itself and the level above (still an enclosure).
    """
    levels = levels or AlphaLevels()
    fields = {}
    for alpha in levels:
        try:
            fields[alpha] = solve_interval(interval_params_at(tfns, alpha), g, mode, arithmetic)
        except InstabilityError as exc:
            raise InstabilityError(f"alpha = {alpha}: {exc}", d_hi=exc.d_hi, alpha=alpha) from exc
    ordered = sorted(fields, reverse=True)
    for upper, lower in zip(ordered, ordered[1:]):
        fields[lower] = fields[lower].hull(fields[upper])
    return FuzzyField({a: fields[a] for a in sorted(fields)})
