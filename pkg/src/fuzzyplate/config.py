"""Run configuration: YAML file -> validated :class:`RunConfig`.

Every field is optional; omitted fields take the reference-case defaults below.
All physical inputs are SI (nu in m^2/s, h in m, u0 in m/s, times in s)::

    parameters:
      nu: {tfn: [0.000180, 0.000217, 0.000250]}
      h:  {tfn: [0.030, 0.040, 0.050]}
      u0: {tfn: [30, 40, 50], crisp: 40}   # crisp must equal the TFN nominal
    grid:
      nodes: 41
      dt: auto            # or a number of seconds
      d_max: 0.45         # target diffusion number for dt: auto
      record_times: [0.18, 0.36, 0.54, 0.72, 0.90, 1.08]
    alpha:
      levels: [0.0, 0.5, 1.0]   # or  count: 11
    method:
      arithmetic: limit   # limit | standard
      propagation: monotone   # monotone | naive
    stability:
      K: 1.0
      epsilon0: null      # default 1e-3 * U0
      steps: 500
    output:
      directory: out
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .errors import ValidationError
from .fuzzy import MODES, AlphaLevels, TriangularFuzzyNumber
from .scenario import DEFAULT_TFNS, widest_coefficient
from .solver import (DEFAULT_D_MAX, DEFAULT_NODES, PARAMETERS, PROPAGATION_MODES, RECORD_TIMES,
                     GridSpec, auto_dt)

SCHEMA = {
    "parameters": {k: {"tfn", "crisp"} for k in PARAMETERS},
    "grid": {"nodes", "dt", "d_max", "record_times"},
    "alpha": {"levels", "count"},
    "method": {"arithmetic", "propagation"},
    "stability": {"K", "epsilon0", "steps"},
    "output": {"directory"},
}

# plausibility ceilings; values above these are almost certainly not SI
_UNIT_CEILING = {"nu": 1.0, "h": 1.0}


@dataclass(frozen=True)
class RunConfig:
    tfns: dict[str, TriangularFuzzyNumber] = field(default_factory=lambda: dict(DEFAULT_TFNS))
    nodes: int = DEFAULT_NODES
    dt: float | None = None
    d_max: float = DEFAULT_D_MAX
    record_times: tuple[float, ...] = RECORD_TIMES
    levels: AlphaLevels = field(default_factory=AlphaLevels)
    arithmetic: str = "limit"
    propagation: str = "monotone"
    K: float = 1.0
    epsilon0: float | None = None
    stability_steps: int = 500
    output_dir: str = "out"
    defaults_applied: tuple[str, ...] = ()

    def grid(self) -> GridSpec:
        """Shared grid for every case; auto dt is sized on the full TFN supports."""
        dt = self.dt
        if dt is None:
            dt = auto_dt(widest_coefficient(self.tfns), self.nodes, self.record_times, self.d_max)
        return GridSpec(self.nodes, dt, self.record_times)

    def to_dict(self) -> dict:
        return {
            "parameters": {k: {"tfn": self.tfns[k].as_list()} for k in PARAMETERS},
            "grid": {"nodes": self.nodes, "dt": "auto" if self.dt is None else self.dt,
                     "d_max": self.d_max, "record_times": list(self.record_times),
                     "resolved_dt": self.grid().dt},
            "alpha": {"levels": list(self.levels)},
            "method": {"arithmetic": self.arithmetic, "propagation": self.propagation},
            "stability": {"K": self.K, "epsilon0": self.epsilon0, "steps": self.stability_steps},
            "output": {"directory": self.output_dir},
        }

    def digest(self) -> str:
        body = self.to_dict()
        body.pop("output")
        text = json.dumps(body, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()


def _number(value, path, positive=False, nonneg=False, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"expected a number, got {value!r}", path)
    if integer and int(value) != value:
        raise ValidationError(f"expected an integer, got {value!r}", path)
    if positive and not value > 0:
        raise ValidationError(f"must be positive, got {value!r}", path)
    if nonneg and not value >= 0:
        raise ValidationError(f"must be nonnegative, got {value!r}", path)
    return int(value) if integer else float(value)


def _section(raw, name):
    sec = raw.get(name)
    if sec is None:
        return {}
    if not isinstance(sec, dict):
        raise ValidationError("expected a mapping", name)
    allowed = SCHEMA[name]
    unknown = set(sec) - set(allowed)
    if unknown:
        raise ValidationError(f"unknown key(s) {sorted(unknown)}", name)
    return sec


def _parameter(name, sec, defaults):
    path = f"parameters.{name}"
    if not isinstance(sec, dict):
        raise ValidationError("expected a mapping with 'tfn' and/or 'crisp'", path)
    unknown = set(sec) - SCHEMA["parameters"][name]
    if unknown:
        raise ValidationError(f"unknown key(s) {sorted(unknown)}", path)
    tfn = None
    if "tfn" in sec:
        raw = sec["tfn"]
        if not isinstance(raw, (list, tuple)) or len(raw) != 3:
            raise ValidationError("expected [left, nominal, right]", f"{path}.tfn")
        vals = [_number(v, f"{path}.tfn") for v in raw]
        try:
            tfn = TriangularFuzzyNumber(*vals)
        except ValidationError as exc:
            raise ValidationError(str(exc), f"{path}.tfn") from None
    if "crisp" in sec:
        crisp = _number(sec["crisp"], f"{path}.crisp")
        if tfn is None:
            tfn = TriangularFuzzyNumber.crisp(crisp)
        elif crisp != tfn.nominal:
            raise ValidationError(f"crisp value {crisp} differs from TFN nominal {tfn.nominal}",
                                  f"{path}.crisp")
    if tfn is None:
        defaults.append(path)
        return DEFAULT_TFNS[name]
    if name in ("nu", "h") and not tfn.left > 0:
        raise ValidationError("must be positive (SI units)", path)
    if name == "u0" and not tfn.left >= 0:
        raise ValidationError("must be nonnegative (SI units)", path)
    ceiling = _UNIT_CEILING.get(name)
    if ceiling is not None and tfn.right > ceiling:
        unit = "m" if name == "h" else "m^2/s"
        raise ValidationError(f"{tfn.right} exceeds {ceiling} {unit}; inputs are SI "
                              f"(e.g. h = 40 mm is 0.040)", path)
    return tfn


def parse_config(raw: dict | None) -> RunConfig:
    raw = raw or {}
    if not isinstance(raw, dict):
        raise ValidationError("config root must be a mapping")
    unknown = set(raw) - set(SCHEMA)
    if unknown:
        raise ValidationError(f"unknown top-level key(s) {sorted(unknown)}")
    defaults: list[str] = []

    params = _section(raw, "parameters")
    tfns = {}
    for name in PARAMETERS:
        if name in params:
            tfns[name] = _parameter(name, params[name], defaults)
        else:
            defaults.append(f"parameters.{name}")
            tfns[name] = DEFAULT_TFNS[name]

    def pick(sec, secname, key, default):
        if key in sec and sec[key] is not None:
            return sec[key]
        defaults.append(f"{secname}.{key}")
        return default

    grid = _section(raw, "grid")
    nodes = _number(pick(grid, "grid", "nodes", DEFAULT_NODES), "grid.nodes", integer=True)
    if nodes < 3:
        raise ValidationError("need at least 3 nodes", "grid.nodes")
    dt_raw = pick(grid, "grid", "dt", "auto")
    dt = None if dt_raw == "auto" else _number(dt_raw, "grid.dt", positive=True)
    d_max = _number(pick(grid, "grid", "d_max", DEFAULT_D_MAX), "grid.d_max", positive=True)
    if d_max > 0.5:
        raise ValidationError("must not exceed 0.5", "grid.d_max")
    times_raw = pick(grid, "grid", "record_times", list(RECORD_TIMES))
    if not isinstance(times_raw, (list, tuple)) or not times_raw:
        raise ValidationError("expected a nonempty list of times in seconds", "grid.record_times")
    times = tuple(_number(t, "grid.record_times", nonneg=True) for t in times_raw)

    alpha = _section(raw, "alpha")
    if "levels" in alpha and "count" in alpha:
        raise ValidationError("give either 'levels' or 'count', not both", "alpha")
    try:
        if "levels" in alpha:
            if not isinstance(alpha["levels"], (list, tuple)):
                raise ValidationError("expected a list")
            levels = AlphaLevels(tuple(_number(a, "alpha.levels") for a in alpha["levels"]))
        elif "count" in alpha:
            levels = AlphaLevels.uniform(_number(alpha["count"], "alpha.count", integer=True))
        else:
            defaults.append("alpha.levels")
            levels = AlphaLevels()
    except ValidationError as exc:
        if exc.field:
            raise
        raise ValidationError(str(exc), "alpha") from None

    method = _section(raw, "method")
    arithmetic = pick(method, "method", "arithmetic", "limit")
    if arithmetic not in MODES:
        raise ValidationError(f"expected one of {MODES}, got {arithmetic!r}", "method.arithmetic")
    propagation = pick(method, "method", "propagation", "monotone")
    if propagation not in PROPAGATION_MODES:
        raise ValidationError(f"expected one of {PROPAGATION_MODES}, got {propagation!r}",
                              "method.propagation")

    stab = _section(raw, "stability")
    K = _number(pick(stab, "stability", "K", 1.0), "stability.K", positive=True)
    eps_raw = pick(stab, "stability", "epsilon0", None)
    epsilon0 = None if eps_raw is None else _number(eps_raw, "stability.epsilon0", nonneg=True)
    steps = _number(pick(stab, "stability", "steps", 500), "stability.steps", integer=True,
                    positive=True)

    out = _section(raw, "output")
    directory = pick(out, "output", "directory", "out")
    if not isinstance(directory, str) or not directory:
        raise ValidationError("expected a path string", "output.directory")

    cfg = RunConfig(tfns, nodes, dt, d_max, times, levels, arithmetic, propagation, K, epsilon0,
                    steps, directory, tuple(defaults))
    cfg.grid()  # multiplicity of record times against dt
    return cfg


def read_config(path: str | Path | None) -> RunConfig:
    if path is None:
        return parse_config({})
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read config: {exc}", str(path)) from None
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ValidationError(f"malformed YAML: {exc}", str(path)) from None
    return parse_config(raw)
