"""CSV profile records and JSON reports.

CSV columns (fixed order)::

    case,alpha,time_s,node,y_norm,u_lo,u_mid,u_hi

one row per (case, alpha, time, node).  ``u_mid`` is the alpha = 1 value at
that node and time.  Floats are written with ``repr`` so a re-parse gives
back the exact values.
"""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

from .solver import CrispField, FuzzyField, GridSpec

HEADER = ("case", "alpha", "time_s", "node", "y_norm", "u_lo", "u_mid", "u_hi")


def crisp_records(case: str, field: CrispField, grid: GridSpec):
    y = grid.y
    for i, t in enumerate(field.times):
        for j, u in enumerate(field.values[i]):
            u = float(u)
            yield (case, 1.0, t, j, float(y[j]), u, u, u)


def fuzzy_records(case: str, field: FuzzyField, grid: GridSpec):
    y = grid.y
    core = field.core
    for alpha in field.levels:
        f = field[alpha]
        for i, t in enumerate(f.times):
            for j in range(grid.nodes):
                yield (case, alpha, t, j, float(y[j]), float(f.lo[i, j]),
                       float(core.lo[i, j]), float(f.hi[i, j]))


def _fmt(v):
    return repr(float(v)) if isinstance(v, float) else str(v)


def format_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADER)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def write_csv(path, rows) -> Path:
    path = Path(path)
    path.write_text(format_csv(rows))
    return path


def read_csv(path) -> list[tuple]:
    """Parse a file written by :func:`write_csv` back into typed rows."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != HEADER:
            raise ValueError(f"unexpected CSV header {header}")
        return [(r[0], float(r[1]), float(r[2]), int(r[3]), float(r[4]),
                 float(r[5]), float(r[6]), float(r[7])) for r in reader]


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k) if not isinstance(k, str) else k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def format_json(obj) -> str:
    return json.dumps(_plain(obj), indent=2) + "\n"


def write_json(path, obj) -> Path:
    path = Path(path)
    path.write_text(format_json(obj))
    return path
