"""Acceptance criteria, one test per criterion.

Each test records a one-line verdict that the conftest summary hook prints
after the run.  ``python tests/test_acceptance.py`` prints the same lines
without pytest.
"""
import contextlib
import io
import sys
import tempfile
import time
from pathlib import Path

import numpy as np

from fuzzyplate.analytic import series_velocity
from fuzzyplate.cli import main as cli_main
from fuzzyplate.fuzzy import (AlphaLevels, Interval, TriangularFuzzyNumber, alpha_cut, iv_div,
                              iv_mul)
from fuzzyplate.output import HEADER, format_csv, fuzzy_records, read_csv
from fuzzyplate.scenario import (ALL_CASES, DEFAULT_TFNS, ScenarioSpec, default_grid,
                                 random_draw_violation, run_case, sensitivity_ranking,
                                 vertex_oracle)
from fuzzyplate.solver import GridSpec, PhysicalParams, grid_for, solve_crisp, solve_fuzzy
from fuzzyplate.stability import check_stability, seeded_error_experiment

NOMINAL = PhysicalParams(2.17e-4, 0.040, 40.0)
GRID = default_grid()
LEVELS_0_HALF = {0.0: AlphaLevels((0.0, 1.0)), 0.5: AlphaLevels((0.5, 1.0))}

_cases = {}


def _all_cases():
    if not _cases:
        _cases.update({fs: run_case(ScenarioSpec(fs, grid=GRID), vertex_levels=())
                       for fs in ALL_CASES})
    return _cases


def _series_error(p, g, terms=200):
    f = solve_crisp(p, g)
    return max(float(np.max(np.abs(f.at(t) - series_velocity(g.y, t, p.nu, p.h, p.u0, terms)))) / p.u0
               for t in g.record_times)


def criterion_1():
    nominal_grid = grid_for(NOMINAL.coefficient)
    parts, ok = [], True
    for name, g in (("nominal auto dt", nominal_grid), ("shared auto dt", GRID)):
        err = _series_error(NOMINAL, g)
        fine = GridSpec(2 * (g.nodes - 1) + 1, g.dt / 4, g.record_times)
        err_fine = _series_error(NOMINAL, fine)
        ok &= err <= 0.01 and err_fine < err
        parts.append(f"{name} {g.dt:.3e}: err {err:.2e} -> {err_fine:.2e} U0")
    t0 = time.perf_counter()
    solve_crisp(NOMINAL, nominal_grid)
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 1.0
    return ok, "; ".join(parts) + f"; runtime {elapsed * 1e3:.1f} ms"


def criterion_2():
    d_values = [0.0, 0.1, 0.434, 0.4999999, 0.5, 0.5 + 1e-12, 0.6, 1.0, 2.0]
    bound_ok = all(check_stability(Interval(0.0, d), 1.0).stable == (d <= 0.5) for d in d_values)
    c = NOMINAL.coefficient

    def grid_with_d(d):
        return GridSpec(41, d / (c * 40 ** 2), ())

    stable = seeded_error_experiment(NOMINAL, grid_with_d(0.434), steps=500).max_growth
    unstable = seeded_error_experiment(NOMINAL, grid_with_d(0.6), steps=200).max_growth
    ok = bound_ok and stable <= 1 + 1e-9 and unstable > 10
    return ok, (f"classical bound {'matches' if bound_ok else 'MISMATCH'} on {len(d_values)} d values; "
                f"growth {stable:.12f} at d=0.434 (500 steps), {unstable:.3g} at d=0.6 (200 steps)")


def criterion_3():
    ff = solve_fuzzy(DEFAULT_TFNS, GRID)
    crisp = solve_crisp(NOMINAL, GRID).values
    scale = np.maximum(np.abs(crisp), np.finfo(float).tiny)
    rel = max(float(np.max(np.abs(ff.core.lo - crisp) / scale)),
              float(np.max(np.abs(ff.core.hi - crisp) / scale)))
    return rel <= 1e-12, f"max relative difference {rel:.3e} (limit 1e-12)"


def criterion_4():
    t0 = time.perf_counter()
    worst, bad = 0.0, []
    for k, fs in enumerate(ALL_CASES):
        spec = ScenarioSpec(fs, grid=GRID, mode="monotone")
        for a, levels in LEVELS_0_HALF.items():
            field = solve_fuzzy(spec.effective_tfns, GRID, levels, "monotone")[a]
            v = field.containment_violation(vertex_oracle(spec, a))
            r = random_draw_violation(spec, a, field, draws=100, seed=k)
            worst = max(worst, v, r)
            if v or r:
                bad.append(f"{spec.id}@{a}")
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 30
    return ok, (f"7 cases x alpha {{0, 0.5}}: vertex + 100 draws, escapes {bad or 'none'}, "
                f"worst {worst:.1e}; runtime {elapsed:.2f} s")


def criterion_5():
    ff = solve_fuzzy(ScenarioSpec(frozenset({"u0"})).effective_tfns, GRID, LEVELS_0_HALF[0.0])
    nominal = solve_crisp(NOMINAL, GRID).values
    lo_ref, hi_ref = 0.75 * nominal, 1.25 * nominal
    scale = np.maximum(np.abs(hi_ref), np.finfo(float).tiny)
    f = ff[0.0]
    rel = max(float(np.max(np.abs(f.lo - lo_ref) / scale)),
              float(np.max(np.abs(f.hi - hi_ref) / scale)))
    return rel <= 1e-10, f"bounds vs 0.75x/1.25x nominal, max relative difference {rel:.3e}"


def criterion_6a():
    rows, ok = [], True
    for fs, cr in _all_cases().items():
        w = list(cr.widths.mean_width_per_time.values())
        good = cr.widths.nondecreasing()
        ok &= good
        if not good:
            peak = int(np.argmax(w))
            rows.append(f"{cr.spec.id} peaks at t={GRID.record_times[peak]} ({w[peak]:.3f} -> {w[-1]:.3f})")
    return ok, ("every case nondecreasing" if ok else
                "non-monotone: " + ", ".join(rows))


def criterion_6b():
    res = _all_cases()
    avg = {cr.spec.id: cr.widths.time_averaged_mean_width for cr in res.values()}
    top = avg.pop("nu+h+u0")
    runner = max(avg, key=avg.get)
    return top > avg[runner], f"nu+h+u0 {top:.3f} vs next largest {runner} {avg[runner]:.3f}"


def criterion_6c():
    r = sensitivity_ranking(GRID)
    s = r.scores
    ok = s["nu"] < s["h"] and s["nu"] < s["u0"]
    return ok, "ranking " + ", ".join(f"{c} {w:.3f}" for c, w in r.ranking)


def _naive_wider(rng):
    def tfn(nominal, spread):
        a, b = rng.uniform(0.02, spread, 2)
        return TriangularFuzzyNumber(nominal * (1 - a), nominal, nominal * (1 + b))

    tfns = {"nu": tfn(2.17e-4, 0.2), "h": tfn(0.04, 0.2), "u0": tfn(40.0, 0.3)}
    g = default_grid(tfns, nodes=int(rng.integers(11, 31)),
                     record_times=(0.18, 0.36), d_max=float(rng.uniform(0.2, 0.45)))
    levels = AlphaLevels((0.0, 1.0))
    mono = solve_fuzzy(tfns, g, levels, "monotone", "standard")[0.0]
    naive = solve_fuzzy(tfns, g, levels, "naive", "standard")[0.0]
    return float(np.min(naive.width - mono.width)), naive.contains(mono)


def criterion_7():
    rng = np.random.default_rng(2024)
    nested = 0
    for _ in range(1000):
        f = TriangularFuzzyNumber(*np.sort(rng.uniform(-1e3, 1e3, 3)))
        a1, a2 = np.sort(rng.uniform(0, 1, 2))
        c1, c2 = alpha_cut(f, a1), alpha_cut(f, a2)
        ends = alpha_cut(f, 0.0).contains(c1) and c2.contains(alpha_cut(f, 1.0))
        nested += c1.lo <= c2.lo and c2.hi <= c1.hi and ends
    agree = 0
    for _ in range(1000):
        a = Interval(*np.sort(rng.uniform(0, 100, 2)))
        b = Interval(*np.sort(rng.uniform(0.01, 100, 2)))
        agree += (iv_mul(a, b, "limit") == iv_mul(a, b, "standard")
                  and iv_div(a, b, "limit") == iv_div(a, b, "standard"))
    x, y = Interval(-1, 2), Interval(3, 4)
    lim, std = iv_mul(x, y, "limit"), iv_mul(x, y, "standard")
    mixed = lim == Interval(-3, 8) and std == Interval(-4, 8)
    gaps = [_naive_wider(rng) for _ in range(20)]
    wider = sum(gap >= -1e-12 and inside for gap, inside in gaps)
    ok = nested == 1000 and agree == 1000 and mixed and wider == 20
    return ok, (f"nesting {nested}/1000, nonnegative agreement {agree}/1000, "
                f"[-1,2]x[3,4] limit {lim.lo:g},{lim.hi:g} standard {std.lo:g},{std.hi:g}; "
                f"naive >= monotone {wider}/20 (min gap {min(g for g, _ in gaps):.2e})")


def criterion_8():
    with tempfile.TemporaryDirectory() as tmp:
        a, b = Path(tmp, "a"), Path(tmp, "b")
        with contextlib.redirect_stdout(io.StringIO()):
            codes = [cli_main(["case", "--all", "--out", str(a)]),
                     cli_main(["case", "--all", "--out", str(b)])]
        names = sorted(p.name for p in a.iterdir())
        same = names == sorted(p.name for p in b.iterdir()) and all(
            (a / n).read_bytes() == (b / n).read_bytes() for n in names)
        csvs = [n for n in names if n.endswith(".csv")]
        lossless = True
        for n in csvs:
            text = (a / n).read_text()
            rows = read_csv(a / n)
            lossless &= format_csv(rows) == text and text.startswith(",".join(HEADER))
        spec = ScenarioSpec(frozenset(("nu", "h", "u0")), grid=GRID)
        ff = solve_fuzzy(spec.effective_tfns, GRID)
        exact = list(fuzzy_records("nu+h+u0", ff, GRID)) == read_csv(a / "nu+h+u0.csv")
    ok = codes == [0, 0] and same and lossless and exact and len(csvs) == 7
    return ok, (f"{len(names)} files {'byte-identical' if same else 'DIFFER'} across runs; "
                f"{len(csvs)} CSVs re-parse {'losslessly' if lossless and exact else 'LOSSY'}")


CRITERIA = {
    "1 crisp accuracy": criterion_1,
    "2 stability certification": criterion_2,
    "3 crisp collapse": criterion_3,
    "4 enclosure": criterion_4,
    "5 U0 linearity": criterion_5,
    "6a mean width nondecreasing": criterion_6a,
    "6b three-parameter case widest": criterion_6b,
    "6c nu least sensitive": criterion_6c,
    "7 arithmetic suite": criterion_7,
    "8 determinism and round trip": criterion_8,
}


def verdict(name):
    ok, detail = CRITERIA[name]()
    return ok, f"{'PASS' if ok else 'FAIL'}  criterion {name}: {detail}"


def _run(name, record_property):
    ok, line = verdict(name)
    record_property("acceptance", line)
    print(line)
    assert ok, line


def test_criterion_1(record_property):
    _run("1 crisp accuracy", record_property)


def test_criterion_2(record_property):
    _run("2 stability certification", record_property)


def test_criterion_3(record_property):
    _run("3 crisp collapse", record_property)


def test_criterion_4(record_property):
    _run("4 enclosure", record_property)


def test_criterion_5(record_property):
    _run("5 U0 linearity", record_property)


def test_criterion_6a(record_property):
    _run("6a mean width nondecreasing", record_property)


def test_criterion_6b(record_property):
    _run("6b three-parameter case widest", record_property)


def test_criterion_6c(record_property):
    _run("6c nu least sensitive", record_property)


def test_criterion_7(record_property):
    _run("7 arithmetic suite", record_property)


def test_criterion_8(record_property):
    _run("8 determinism and round trip", record_property)


if __name__ == "__main__":
    results = [verdict(name) for name in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
