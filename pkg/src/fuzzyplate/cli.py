"""Command-line entry point.

Exit codes: 0 success, 1 validation failure, 2 instability, 3 oracle check failed.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .checks import run_checks
from .config import RunConfig, read_config
from .errors import InstabilityError, ValidationError
from .output import crisp_records, format_json, fuzzy_records, write_csv, write_json
from .scenario import (ALL_CASES, VELOCITY_AXIS_NOTE, CaseResult, ScenarioSpec, parse_case,
                       rank_cases, run_case, velocity_axis_trend)
from .solver import interval_params_at, solve_crisp
from .stability import stability_summary

EXIT_OK, EXIT_VALIDATION, EXIT_UNSTABLE, EXIT_VERIFY = 0, 1, 2, 3


def _provenance(cfg: RunConfig) -> dict:
    return {
        "package_version": __version__,
        "config_sha256": cfg.digest(),
        "defaults_applied": list(cfg.defaults_applied),
        "config": cfg.to_dict(),
    }


def _spec(cfg: RunConfig, fuzzy_set) -> ScenarioSpec:
    return ScenarioSpec(frozenset(fuzzy_set), cfg.tfns, cfg.grid(), cfg.levels,
                        cfg.propagation, cfg.arithmetic)


def case_summary(cr: CaseResult) -> dict:
    w = cr.widths
    return {
        "case": cr.spec.id,
        "fuzzy": sorted(cr.spec.fuzzy_set),
        "width_alpha": w.alpha,
        "mean_width_per_time": {repr(t): v for t, v in w.mean_width_per_time.items()},
        "time_averaged_mean_width": w.time_averaged_mean_width,
        "mean_width_nondecreasing": w.nondecreasing(),
        "velocity_axis_trend": {repr(t): s for t, s in velocity_axis_trend(cr).items()},
        "vertex_enclosure_violation": {repr(a): v for a, v in cr.enclosure_violation.items()},
        "vertex_enclosed": cr.enclosed,
    }


def _stability(cfg: RunConfig) -> dict:
    return stability_summary(interval_params_at(cfg.tfns, 0.0), cfg.grid(), cfg.K,
                             cfg.epsilon0, cfg.stability_steps)


def _outdir(cfg: RunConfig, override) -> Path:
    out = Path(override or cfg.output_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ValidationError(f"cannot create output directory: {exc}", "output.directory") from None
    return out


def cmd_solve(cfg, args):
    spec = _spec(cfg, ())
    field = solve_crisp(spec.nominal, spec.grid)
    path = write_csv(_outdir(cfg, args.out) / "crisp.csv", crisp_records("crisp", field, spec.grid))
    print(path)
    return EXIT_OK


def _write_case(out: Path, cr: CaseResult):
    return write_csv(out / f"{cr.spec.id}.csv", fuzzy_records(cr.spec.id, cr.fuzzy_field, cr.spec.grid))


def cmd_fuzzy_solve(cfg, args):
    spec = _spec(cfg, parse_case(args.fuzzy))
    cr = run_case(spec)
    out = _outdir(cfg, args.out)
    print(_write_case(out, cr))
    summary = {"case": case_summary(cr), "velocity_axis_note": VELOCITY_AXIS_NOTE,
               "stability": _stability(cfg), "provenance": _provenance(cfg)}
    print(write_json(out / f"{spec.id}.json", summary))
    return EXIT_OK


def cmd_case(cfg, args):
    if args.all == bool(args.fuzzy):
        raise ValidationError("give exactly one of --all or --fuzzy", "case")
    cases = ALL_CASES if args.all else (parse_case(args.fuzzy),)
    out = _outdir(cfg, args.out)
    results = []
    for fs in cases:
        cr = run_case(_spec(cfg, fs))
        results.append(cr)
        print(_write_case(out, cr))
    singles = [r for r in results if len(r.spec.fuzzy_set) == 1]
    report = {
        "cases": [case_summary(r) for r in results],
        "velocity_axis_note": VELOCITY_AXIS_NOTE,
        "sensitivity": rank_cases(singles).to_dict() if len(singles) == 3 else None,
        "stability": _stability(cfg),
        "provenance": _provenance(cfg),
    }
    name = "sensitivity.json" if args.all else f"{results[0].spec.id}.json"
    print(write_json(out / name, report))
    return EXIT_OK


def cmd_stability(cfg, args):
    summary = _stability(cfg)
    out = _outdir(cfg, args.out)
    write_json(out / "stability.json", summary)
    sys.stdout.write(format_json(summary))
    return EXIT_OK if summary["stable"] else EXIT_UNSTABLE


def cmd_verify(cfg, args):
    checks = run_checks(cfg)
    for c in checks:
        print(c.line())
    ok = all(c.passed for c in checks)
    if args.out:
        write_json(_outdir(cfg, args.out) / "verify.json",
                   {"passed": ok, "checks": [c.__dict__ for c in checks]})
    print("all checks passed" if ok else "verification FAILED")
    return EXIT_OK if ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML run configuration (defaults: reference case)")
    common.add_argument("--out", help="output directory (overrides output.directory)")

    parser = argparse.ArgumentParser(prog="fuzzyplate", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common], help="crisp run -> crisp.csv").set_defaults(func=cmd_solve)
    p = sub.add_parser("fuzzy-solve", parents=[common], help="one fuzzy case -> CSV + JSON")
    p.add_argument("--fuzzy", required=True, help="comma-separated subset of nu,h,u0 (or 'none')")
    p.set_defaults(func=cmd_fuzzy_solve)
    p = sub.add_parser("case", parents=[common], help="case study runs + sensitivity report")
    p.add_argument("--all", action="store_true", help="all seven fuzzy combinations")
    p.add_argument("--fuzzy", help="a single combination, e.g. nu,h")
    p.set_defaults(func=cmd_case)
    sub.add_parser("stability", parents=[common],
                   help="stability report for the widest parameter box").set_defaults(func=cmd_stability)
    sub.add_parser("verify", parents=[common], help="run the oracle checks").set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = read_config(args.config)
        return args.func(cfg, args)
    except (ValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except InstabilityError as exc:
        print(f"unstable: {exc}", file=sys.stderr)
        return EXIT_UNSTABLE


if __name__ == "__main__":
    sys.exit(main())
