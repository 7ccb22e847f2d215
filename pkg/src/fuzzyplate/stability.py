"""Matrix form of the explicit scheme and its norm-based stability check.

For FTCS the left-hand matrix is the identity, so the update matrix is the
tridiagonal ``(d, 1-2d, d)`` with unit boundary rows.  Its infinity norm is
``max(1, |1-2d| + 2d)``, which is nondecreasing in ``d >= 0``; interval
diffusion numbers are therefore assessed at ``d.hi``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .fuzzy import Interval
from .solver import (GridSpec, IntervalParams, PhysicalParams, _step_bounds, initial_profile,
                     interval_diffusion_number, step_crisp)


@dataclass(frozen=True, eq=False)
class UpdateMatrix:
    """Tridiagonal update matrix; coefficients are evaluated at ``d`` (``d.hi`` for intervals)."""

    size: int
    sub: np.ndarray
    diag: np.ndarray
    sup: np.ndarray
    d: float | Interval

    def dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.sub[1:], -1) + np.diag(self.sup[:-1], 1)

    def apply(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        out = self.diag * u
        out[1:] += self.sub[1:] * u[:-1]
        out[:-1] += self.sup[:-1] * u[1:]
        return out

    def inf_norm(self) -> float:
        return _row_sum_norm(_d_hi(self.d))

    def spectral_radius(self) -> float:
        return float(np.max(np.abs(np.linalg.eigvals(self.dense()))))


def _d_hi(d) -> float:
    return d.hi if isinstance(d, Interval) else float(d)


def _row_sum_norm(d: float) -> float:
    # |1-2d| + 2d, written piecewise so that d <= 1/2 gives exactly 1
    return 1.0 if d <= 0.5 else 4.0 * d - 1.0


def build_update_matrix(d: float | Interval, n: int) -> UpdateMatrix:
    """Row ``i`` holds ``(sub[i], diag[i], sup[i])``; ``sub[0]`` and ``sup[-1]`` are unused zeros."""
    if n < 3:
        raise ValidationError(f"update matrix needs at least 3 nodes, got {n}")
    dv = _d_hi(d)
    sub = np.full(n, dv)
    sup = np.full(n, dv)
    diag = np.full(n, 1.0 - 2.0 * dv)
    sub[0] = sup[0] = sub[-1] = sup[-1] = 0.0
    diag[0] = diag[-1] = 1.0
    return UpdateMatrix(n, sub, diag, sup, d)


@dataclass(frozen=True)
class StabilityReport:
    d: Interval
    inf_norm: float
    stable: bool
    max_stable_dt: float | None
    K: float
    spectral_radius: float | None = None

    def to_dict(self) -> dict:
        return {
            "d": [self.d.lo, self.d.hi],
            "inf_norm": self.inf_norm,
            "K": self.K,
            "stable": self.stable,
            "max_stable_dt": self.max_stable_dt,
            "spectral_radius": self.spectral_radius,
        }


def critical_d(K: float = 1.0) -> float | None:
    """Largest diffusion number whose update-matrix norm stays within ``K``."""
    if K < 1.0:
        return None  # unit boundary rows already give norm 1
    return (K + 1.0) / 4.0


def check_stability(d: Interval | float, K: float = 1.0, dt: float | None = None,
                    nodes: int | None = None) -> StabilityReport:
    """Norm criterion ``||C|| <= K`` at the worst-case endpoint ``d.hi``.

    ``max_stable_dt`` needs the time step that produced ``d``; the spectral
    radius is reported when ``nodes`` is given.
    """
    if not isinstance(d, Interval):
        d = Interval.point(d)
    if d.lo < 0:
        raise ValidationError("diffusion number must be nonnegative")
    norm = _row_sum_norm(d.hi)
    d_crit = critical_d(K)
    max_dt = None
    if dt is not None and d_crit is not None and d.hi > 0:
        max_dt = dt * d_crit / d.hi
    rho = build_update_matrix(d, nodes).spectral_radius() if nodes else None
    return StabilityReport(d, norm, norm <= K, max_dt, K, rho)


@dataclass(frozen=True)
class ErrorProbe:
    epsilon0: float
    growth: list[float] = field(default_factory=list)
    degenerate: bool = False

    @property
    def max_growth(self) -> float:
        return max(self.growth)


def seeded_error_experiment(p: PhysicalParams | IntervalParams, g: GridSpec,
                            epsilon0: float | None = None, steps: int = 500,
                            node: int = 1) -> ErrorProbe:
    """March the unperturbed and the perturbed initial data side by side.

    The perturbation of size ``epsilon0`` (default ``1e-3 * U0``) sits at
    ``node``, next to the moving wall since the wall value itself is held.
    ``growth[k] = ||e_k||_inf / ||e_0||_inf`` with ``growth[0] = 1``.
    Interval parameters are marched with the monotone interval step and the
    error is measured on both bounds.
    """
    if not 0 < node < g.nodes - 1:
        raise ValidationError(f"seed node must be interior, got {node}")
    if isinstance(p, PhysicalParams):
        p = IntervalParams.from_crisp(p)
        crisp = True
    else:
        crisp = p.nu.is_degenerate and p.h.is_degenerate and p.u0.is_degenerate
    if epsilon0 is None:
        epsilon0 = 1e-3 * p.u0.hi
    if epsilon0 < 0:
        raise ValidationError("seed magnitude must be nonnegative")
    if epsilon0 == 0:
        return ErrorProbe(0.0, [0.0] * (steps + 1), degenerate=True)

    d = interval_diffusion_number(p, g)
    base = np.stack([initial_profile(p.u0.lo, g.nodes), initial_profile(p.u0.hi, g.nodes)])
    pert = base.copy()
    pert[:, node] += epsilon0
    growth = [1.0]
    for _ in range(steps):
        if crisp:
            base = step_crisp(base, d.lo)
            pert = step_crisp(pert, d.lo)
        else:
            base = np.stack(_step_bounds(base[0], base[1], d.lo, d.hi))
            pert = np.stack(_step_bounds(pert[0], pert[1], d.lo, d.hi))
        growth.append(float(np.max(np.abs(pert - base))) / epsilon0)
    return ErrorProbe(float(epsilon0), growth)


def stability_summary(p: IntervalParams, g: GridSpec, K: float = 1.0,
                      epsilon0: float | None = None, steps: int = 500) -> dict:
    d = interval_diffusion_number(p, g)
    report = check_stability(d, K, dt=g.dt, nodes=g.nodes)
    out = report.to_dict()
    out["dt"] = g.dt
    out["nodes"] = g.nodes
    if report.stable:
        probe = seeded_error_experiment(p, g, epsilon0, steps)
        out["seeded_error"] = {"epsilon0": probe.epsilon0, "steps": steps,
                               "max_growth": probe.max_growth, "final_growth": probe.growth[-1]}
    else:
        out["seeded_error"] = None
    return out
