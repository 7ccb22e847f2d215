"""Oracle cross-checks run by ``fuzzyplate verify``."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .analytic import series_velocity
from .config import RunConfig
from .fuzzy import AlphaLevels
from .scenario import ALL_CASES, ScenarioSpec, random_draw_violation, vertex_oracle
from .solver import GridSpec, interval_diffusion_number, interval_params_at, solve_crisp, solve_fuzzy
from .stability import check_stability, seeded_error_experiment


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}: {self.detail}"


def series_error(p, g: GridSpec, terms: int = 200) -> float:
    """Max node error against the Fourier series over all record times, in units of U0."""
    field = solve_crisp(p, g)
    err = max(float(np.max(np.abs(field.at(t) - series_velocity(g.y, t, p.nu, p.h, p.u0, terms))))
              for t in g.record_times if t > 0)
    return err / p.u0 if p.u0 > 0 else err


def check_series(cfg: RunConfig) -> list[Check]:
    spec = ScenarioSpec(frozenset(), cfg.tfns, cfg.grid())
    p, g = spec.nominal, spec.grid
    err = series_error(p, g)
    fine = GridSpec(2 * (g.nodes - 1) + 1, g.dt / 4, g.record_times)
    err_fine = series_error(p, fine)
    return [
        Check("fourier_series", err <= 0.01, f"max |u - series| = {err:.3e} U0 (limit 1e-2)"),
        Check("grid_refinement", err_fine < err,
              f"error {err:.3e} -> {err_fine:.3e} U0 with dy/2, dt/4"),
    ]


def check_collapse(cfg: RunConfig) -> Check:
    spec = ScenarioSpec(frozenset(("nu", "h", "u0")), cfg.tfns, cfg.grid())
    ff = solve_fuzzy(spec.tfns, spec.grid, cfg.levels, cfg.propagation, cfg.arithmetic)
    crisp = solve_crisp(spec.nominal, spec.grid).values
    core = ff.core
    scale = np.maximum(np.abs(crisp), np.finfo(float).tiny)
    rel = float(max(np.max(np.abs(core.lo - crisp) / scale), np.max(np.abs(core.hi - crisp) / scale)))
    return Check("alpha1_collapse", rel <= 1e-12, f"max relative difference {rel:.3e} (limit 1e-12)")


def check_enclosure(cfg: RunConfig, alphas=(0.0, 0.5), draws: int = 100) -> Check:
    worst = 0.0
    bad = []
    grid = cfg.grid()
    for k, case in enumerate(ALL_CASES):
        spec = ScenarioSpec(case, cfg.tfns, grid, mode="monotone", arithmetic="standard")
        for a in alphas:
            field = solve_fuzzy(spec.effective_tfns, grid, _levels_with(a), "monotone", "standard")[a]
            v = field.containment_violation(vertex_oracle(spec, a))
            r = random_draw_violation(spec, a, field, draws, seed=k)
            worst = max(worst, v, r)
            if v or r:
                bad.append(f"{spec.id}@{a}")
    detail = (f"{len(ALL_CASES)} cases x alpha {list(alphas)}: vertex and {draws} random draws inside"
              if not bad else f"escapes in {bad}, worst {worst:.3e}")
    return Check("vertex_enclosure", not bad, detail)


def _levels_with(alpha):
    return AlphaLevels((alpha, 1.0)) if alpha < 1.0 else AlphaLevels((1.0,))


def check_u0_scaling(cfg: RunConfig) -> Check:
    spec = ScenarioSpec(frozenset({"u0"}), cfg.tfns, cfg.grid())
    f = solve_fuzzy(spec.effective_tfns, spec.grid, _levels_with(0.0), cfg.propagation,
                    cfg.arithmetic)[0.0]
    nominal = solve_crisp(spec.nominal, spec.grid).values
    u0 = cfg.tfns["u0"]
    if u0.nominal == 0:
        return Check("u0_linearity", True, "U0 nominal is zero; nothing to scale")
    lo_ref = nominal * (u0.left / u0.nominal)
    hi_ref = nominal * (u0.right / u0.nominal)
    scale = np.maximum(np.abs(hi_ref), np.finfo(float).tiny)
    rel = float(max(np.max(np.abs(f.lo - lo_ref) / scale), np.max(np.abs(f.hi - hi_ref) / scale)))
    return Check("u0_linearity", rel <= 1e-10,
                 f"bounds vs {u0.left / u0.nominal:g}x/{u0.right / u0.nominal:g}x nominal, "
                 f"max relative difference {rel:.3e} (limit 1e-10)")


def check_stability_bound(cfg: RunConfig) -> Check:
    g = cfg.grid()
    p = interval_params_at(cfg.tfns, 0.0)
    d = interval_diffusion_number(p, g, cfg.arithmetic)
    report = check_stability(d, cfg.K)
    probe = seeded_error_experiment(p, g, cfg.epsilon0, cfg.stability_steps)
    ok = report.stable and probe.max_growth <= cfg.K + 1e-9
    return Check("stability", ok, f"d = [{d.lo:.4f}, {d.hi:.4f}], ||C|| = {report.inf_norm:g}, "
                                  f"max seeded-error growth {probe.max_growth:.6f}")


def run_checks(cfg: RunConfig) -> list[Check]:
    return [*check_series(cfg), check_collapse(cfg), check_enclosure(cfg),
            check_u0_scaling(cfg), check_stability_bound(cfg)]
