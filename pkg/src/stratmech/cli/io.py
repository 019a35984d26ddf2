"""Byte-stable CSV/JSON output with atomic writes, and the row validator."""

import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np

from ..bundle import RADIUS, times_i

TEXT_COLUMNS = ("stratum", "engine", "verdict")


def fmt(x):
    if isinstance(x, str):
        return x
    x = float(x)
    if x == 0.0:
        return "0"  # no negative zero in files
    return format(x, ".17g")


def atomic_write(path, data):
    """Write text to a sibling temp file and rename it over ``path``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(columns, rows):
    lines = [",".join(columns)]
    lines += [",".join(fmt(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def _json_value(v):
    if isinstance(v, str):
        return v
    v = float(v)
    if not math.isfinite(v):
        return None
    return 0.0 if v == 0.0 else v


def json_text(payload):
    return json.dumps(payload, indent=1, sort_keys=True, allow_nan=False) + "\n"


def table_payload(columns, rows, **meta):
    out = dict(meta)
    out["columns"] = list(columns)
    out["rows"] = [[_json_value(v) for v in row] for row in rows]
    return out


def write_table(out_dir, name, columns, rows, formats, **meta):
    """Write name.csv and/or name.json; returns the written paths."""
    paths = []
    if "csv" in formats:
        p = Path(out_dir) / f"{name}.csv"
        atomic_write(p, csv_text(columns, rows))
        paths.append(p)
    if "json" in formats:
        p = Path(out_dir) / f"{name}.json"
        atomic_write(p, json_text(table_payload(columns, rows, **meta)))
        paths.append(p)
    return paths


def read_csv(path):
    """Columns and a dict of column arrays (text columns stay lists of str)."""
    with open(path, encoding="utf-8", newline="") as fh:
        lines = fh.read().split("\n")
    if not lines or not lines[0]:
        raise ValueError(f"{path}: empty file")
    columns = lines[0].split(",")
    rows = [ln.split(",") for ln in lines[1:] if ln]
    data = {}
    for j, col in enumerate(columns):
        vals = []
        for k, row in enumerate(rows):
            if len(row) != len(columns):
                raise ValueError(f"{path}: row {k + 1} has {len(row)} fields")
            vals.append(row[j])
        data[col] = vals if col in TEXT_COLUMNS else np.array([float(v) for v in vals])
    return columns, data


def _cols(data, names):
    return np.column_stack([data[n] for n in names])


def validate_rows(columns, data, s=None):
    """Spot-check state invariants on every row; returns a list of (row, invariant, detail)."""
    problems = []
    cols = set(columns)
    n = len(data["t"]) if "t" in data else 0

    def check(vals, tol, name):
        for k in np.nonzero(np.abs(vals) > tol)[0]:
            problems.append((int(k), name, float(vals[k])))

    if "t" in data and n > 1:
        check(np.minimum(np.diff(data["t"]), 0.0), 0.0, "increasing-times")
    full_q = [f"q{i}" for i in range(10)]
    if set(full_q) <= cols:
        Q = _cols(data, full_q)
        P = _cols(data, [f"p{i}" for i in range(10)])
        check(np.linalg.norm(Q, axis=1) - 1.0, 1e-12, "unit-norm")
        check(np.einsum("ij,ij->i", Q, P), 1e-12, "cotangency")
    frame = ["a", "b", "alpha", "beta"]
    if set(frame) <= cols:
        Q = _cols(data, frame)
        P = _cols(data, ["pa", "pb", "palpha", "pbeta"])
        check(np.linalg.norm(Q, axis=1) - 1.0, 1e-12, "unit-norm")
        check(np.einsum("ij,ij->i", Q, P), 1e-10, "tangency")
        iQ = np.array([times_i(q) for q in Q])
        check(np.einsum("ij,ij->i", iQ, P), 1e-10, "horizontality")
    if {"x1", "x2", "x3"} <= cols and s is not None:
        X = _cols(data, ["x1", "x2", "x3"])
        check(np.linalg.norm(X, axis=1) - s, 1e-8, "spin-norm")
    if {"bx", "by", "bz"} <= cols:
        B = _cols(data, ["bx", "by", "bz"])
        check(np.linalg.norm(B, axis=1) - RADIUS, 1e-12, "radius")
        check(np.minimum(B[:, 2], 0.0), 0.0, "hemisphere")
    return problems
