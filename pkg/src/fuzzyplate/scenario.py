"""Case studies: which of nu, h, U0 are fuzzy, and what that does to the solution.

Each case is solved with the interval engine and cross-checked against the
vertex method (crisp solves at every combination of alpha-cut endpoints).
Widths are taken at a single alpha level (the support, alpha = 0, unless
told otherwise) and averaged over interior nodes.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .fuzzy import AlphaLevels, TriangularFuzzyNumber, alpha_cut
from .solver import (PARAMETERS, STABILITY_LIMIT, CrispField, FuzzyField, GridSpec,
                     IntervalField, PhysicalParams, auto_dt, interval_params_at, solve_crisp,
                     solve_crisp_batch, solve_fuzzy)

DEFAULT_TFNS = {
    "nu": TriangularFuzzyNumber(0.000180, 0.000217, 0.000250),
    "h": TriangularFuzzyNumber(0.030, 0.040, 0.050),
    "u0": TriangularFuzzyNumber(30.0, 40.0, 50.0),
}

ALL_CASES = tuple(frozenset(c) for r in (1, 2, 3) for c in itertools.combinations(PARAMETERS, r))
SINGLE_CASES = ALL_CASES[:3]

VELOCITY_AXIS_NOTE = (
    "trend of node-wise width against the local crisp-core velocity at each record "
    "time; 'increases' means faster-moving fluid carries the wider band")


def case_id(fuzzy_set: Iterable[str]) -> str:
    names = [k for k in PARAMETERS if k in set(fuzzy_set)]
    return "+".join(names) if names else "crisp"


def parse_case(text: str) -> frozenset[str]:
    text = text.strip()
    if text in ("", "none", "crisp"):
        return frozenset()
    names = frozenset(s.strip() for s in text.replace("+", ",").split(",") if s.strip())
    unknown = names - set(PARAMETERS)
    if unknown:
        raise ValueError(f"unknown parameter(s) {sorted(unknown)}; expected a subset of {PARAMETERS}")
    return names


def widest_coefficient(tfns: Mapping[str, TriangularFuzzyNumber]) -> float:
    """Upper bound of ``nu/h**2`` over the full supports."""
    return tfns["nu"].right / (tfns["h"].left * tfns["h"].left)


def default_grid(tfns: Mapping[str, TriangularFuzzyNumber] = DEFAULT_TFNS, nodes: int = 41,
                 record_times=None, d_max: float = 0.45) -> GridSpec:
    """Grid whose auto dt is stable for every case built from ``tfns``."""
    kwargs = {} if record_times is None else {"record_times": tuple(record_times)}
    g = GridSpec(nodes=nodes, **kwargs)
    return GridSpec(nodes, auto_dt(widest_coefficient(tfns), nodes, g.record_times, d_max),
                    g.record_times)


@dataclass(frozen=True)
class ScenarioSpec:
    fuzzy_set: frozenset[str] = frozenset()
    tfns: Mapping[str, TriangularFuzzyNumber] = field(default_factory=lambda: dict(DEFAULT_TFNS))
    grid: GridSpec | None = None
    levels: AlphaLevels = field(default_factory=AlphaLevels)
    mode: str = "monotone"
    arithmetic: str = "limit"

    def __post_init__(self):
        fs = frozenset(self.fuzzy_set)
        unknown = fs - set(PARAMETERS)
        if unknown:
            raise ValueError(f"unknown fuzzy parameter(s): {sorted(unknown)}")
        object.__setattr__(self, "fuzzy_set", fs)
        if self.grid is None:
            object.__setattr__(self, "grid", default_grid(self.tfns))

    @property
    def id(self) -> str:
        return case_id(self.fuzzy_set)

    @property
    def effective_tfns(self) -> dict[str, TriangularFuzzyNumber]:
        """Fuzzy parameters as given, the rest collapsed onto their nominal."""
        return {k: self.tfns[k] if k in self.fuzzy_set else
                TriangularFuzzyNumber.crisp(self.tfns[k].nominal) for k in PARAMETERS}

    @property
    def nominal(self) -> PhysicalParams:
        return PhysicalParams(*(self.tfns[k].nominal for k in PARAMETERS))

    def with_fuzzy(self, fuzzy_set) -> "ScenarioSpec":
        return ScenarioSpec(frozenset(fuzzy_set), self.tfns, self.grid, self.levels,
                            self.mode, self.arithmetic)


@dataclass(frozen=True, eq=False)
class WidthMetrics:
    alpha: float
    mean_width_per_time: dict[float, float]
    width_profile: dict[float, np.ndarray]
    time_averaged_mean_width: float

    def nondecreasing(self, rtol: float = 1e-12) -> bool:
        w = list(self.mean_width_per_time.values())
        return all(b >= a - rtol * max(abs(a), 1.0) for a, b in zip(w, w[1:]))


@dataclass(frozen=True, eq=False)
class CaseResult:
    spec: ScenarioSpec
    fuzzy_field: FuzzyField
    vertex_envelope: dict[float, IntervalField]
    widths: WidthMetrics
    enclosure_violation: dict[float, float]

    @property
    def enclosed(self) -> bool:
        return all(v == 0.0 for v in self.enclosure_violation.values())


def _vertex_params(spec: ScenarioSpec, alpha: float) -> list[PhysicalParams]:
    tfns = spec.effective_tfns
    cuts = {k: alpha_cut(tfns[k], alpha) for k in PARAMETERS}
    choices = [(cuts[k].lo, cuts[k].hi) if k in spec.fuzzy_set else (cuts[k].lo,)
               for k in PARAMETERS]
    return [PhysicalParams(*vals) for vals in itertools.product(*choices)]


def _solve_own_grid(p: PhysicalParams, g: GridSpec) -> CrispField:
    if g.diffusion_number(p.coefficient) <= STABILITY_LIMIT:
        return solve_crisp(p, g)
    own = GridSpec(g.nodes, auto_dt(p.coefficient, g.nodes, g.record_times), g.record_times)
    return solve_crisp(p, own)


def vertex_oracle(spec: ScenarioSpec, alpha: float) -> IntervalField:
    """Node-wise min/max over the ``2**m`` crisp endpoint solves."""
    solutions = np.array([_solve_own_grid(p, spec.grid).values for p in _vertex_params(spec, alpha)])
    return IntervalField(spec.grid.record_times, solutions.min(axis=0), solutions.max(axis=0))


def sweep_envelope(spec: ScenarioSpec, alpha: float, points: int = 5) -> IntervalField:
    """Envelope over a dense tensor grid of parameter values inside the alpha box."""
    tfns = spec.effective_tfns
    axes = []
    for k in PARAMETERS:
        cut = alpha_cut(tfns[k], alpha)
        axes.append(np.linspace(cut.lo, cut.hi, points) if k in spec.fuzzy_set else np.array([cut.lo]))
    mesh = [m.ravel() for m in np.meshgrid(*axes, indexing="ij")]
    sol = solve_crisp_batch(*mesh, spec.grid)
    return IntervalField(spec.grid.record_times, sol.min(axis=1), sol.max(axis=1))


def random_draw_violation(spec: ScenarioSpec, alpha: float, field: IntervalField,
                          draws: int = 100, seed: int = 0, rtol: float = 1e-12) -> float:
    """Largest excursion of uniformly drawn crisp solutions outside ``field``."""
    rng = np.random.default_rng(seed)
    tfns = spec.effective_tfns
    samples = []
    for k in PARAMETERS:
        cut = alpha_cut(tfns[k], alpha)
        samples.append(rng.uniform(cut.lo, cut.hi, draws) if cut.width > 0 else np.full(draws, cut.lo))
    sol = solve_crisp_batch(*samples, spec.grid)
    worst = 0.0
    for i in range(draws):
        inner = CrispField(spec.grid.record_times, sol[:, i, :])
        worst = max(worst, field.containment_violation(inner, rtol))
    return worst


def width_metrics(cr: CaseResult | FuzzyField, alpha: float = 0.0) -> WidthMetrics:
    ff = cr.fuzzy_field if isinstance(cr, CaseResult) else cr
    f = ff[alpha]
    w = f.width
    per_time = {t: float(np.mean(w[i, 1:-1])) for i, t in enumerate(f.times)}
    profile = {t: w[i].copy() for i, t in enumerate(f.times)}
    avg = float(np.mean(list(per_time.values()))) if per_time else 0.0
    return WidthMetrics(alpha, per_time, profile, avg)


def run_case(spec: ScenarioSpec, vertex_levels: Iterable[float] | None = None,
             width_alpha: float = 0.0, rtol: float = 1e-12) -> CaseResult:
    ff = solve_fuzzy(spec.effective_tfns, spec.grid, spec.levels, spec.mode, spec.arithmetic)
    levels = tuple(spec.levels) if vertex_levels is None else tuple(vertex_levels)
    envelopes = {a: vertex_oracle(spec, a) for a in levels}
    violation = {a: ff[a].containment_violation(envelopes[a], rtol) for a in levels}
    partial = CaseResult(spec, ff, envelopes, None, violation)
    return CaseResult(spec, ff, envelopes, width_metrics(partial, width_alpha), violation)


def velocity_axis_trend(cr: CaseResult) -> dict[float, str]:
    """Sign of the width-versus-core-velocity covariance over interior nodes."""
    core = cr.fuzzy_field.core
    alpha = cr.widths.alpha
    out = {}
    for i, t in enumerate(core.times):
        u = core.lo[i, 1:-1]
        w = cr.fuzzy_field[alpha].width[i, 1:-1]
        cov = float(np.mean((u - u.mean()) * (w - w.mean())))
        scale = max(float(np.std(u) * np.std(w)), 1e-300)
        if abs(cov) <= 1e-9 * scale or np.all(w == 0):
            out[t] = "flat"
        else:
            out[t] = "increases" if cov > 0 else "decreases"
    return out


@dataclass(frozen=True)
class SensitivityReport:
    ranking: list[tuple[str, float]]

    @property
    def scores(self) -> dict[str, float]:
        return dict(self.ranking)

    @property
    def h_and_u0_exceed_nu(self) -> bool:
        s = self.scores
        return s["h"] > s["nu"] and s["u0"] > s["nu"]

    def to_dict(self) -> dict:
        return {
            "ranking": [{"case": c, "time_averaged_mean_width": w} for c, w in self.ranking],
            "h_and_u0_exceed_nu": self.h_and_u0_exceed_nu,
        }


def rank_cases(results: Iterable[CaseResult]) -> SensitivityReport:
    """Most sensitive first; ties keep the input order."""
    scored = [(r.spec.id, r.widths.time_averaged_mean_width) for r in results]
    order = sorted(range(len(scored)), key=lambda i: -scored[i][1])
    return SensitivityReport([scored[i] for i in order])


def sensitivity_ranking(grid: GridSpec | None = None, levels: AlphaLevels | None = None,
                        tfns: Mapping[str, TriangularFuzzyNumber] = DEFAULT_TFNS,
                        mode: str = "monotone", arithmetic: str = "limit") -> SensitivityReport:
    base = ScenarioSpec(frozenset(), dict(tfns), grid, levels or AlphaLevels((0.0, 1.0)),
                        mode, arithmetic)
    return rank_cases(run_case(base.with_fuzzy(c), vertex_levels=()) for c in SINGLE_CASES)
