"""Batch runs: families x sizes x fields x theorems -> per-cell reports + CSV.

Config (JSON)::

    {
      "name": "stock",
      "seed": 7,
      "oracle": "spanned",
      "alarm": 8.0,
      "sweeps": [
        {"family": "lines_in_flats", "ambient_dim": 3, "fields": [101],
         "sizes": [6, 12, 24, 48], "lines_per_flat": 3, "m": 2,
         "theorems": ["i0", "i1"], "r": 2, "k": 2, "repeats": 2}
      ]
    }

``size`` is the number of lines (``generic_lines``, ``lines_in_flats``,
``concurrent_bundle``) or the grid side (``grid``).  ``lines_per_flat`` may
be ``"sqrt"`` for round(sqrt(size)).  S is the grid for ``grid`` and
P_2(T) otherwise.
"""
from __future__ import annotations

import csv
import hashlib
import io
import math
from dataclasses import dataclass
from pathlib import Path

from ..errors import InputError
from ..exactfield import FieldSpec
from ..geom import GeneratorConfig, generate, grid_instance
from ..incidence import rich_points
from .report import dumps
from .verify import DEFAULT_ALARM, verify_i0, verify_i1, verify_r, verify_trivial

CSV_COLUMNS = ["family", "n", "p", "size", "theorem", "lhs", "rhs_total", "ratio"]
CELL_THEOREMS = ("i0", "i1", "r", "trivial")


def cell_seed(base: int, *parts) -> int:
    blob = ":".join(str(x) for x in (base,) + parts).encode()
    return int.from_bytes(hashlib.sha256(blob).digest()[:8], "big")


@dataclass
class Cell:
    family: str
    n: int
    field: str
    size: int
    theorem: str
    repeat: int
    sweep: dict
    sweep_index: int = 0


def _cells(config: dict):
    for si, sw in enumerate(config.get("sweeps", [])):
        fields = sw.get("fields", [sw["field"]] if "field" in sw else [])
        for fld in fields:
            for size in sw.get("sizes", []):
                for rep in range(int(sw.get("repeats", 1))):
                    for th in sw.get("theorems", []):
                        yield Cell(sw.get("family"), int(sw.get("ambient_dim", 3)), str(fld), int(size), th, rep, sw, si)


def build_instance(cell: Cell, seed: int):
    """(S, T) for a cell; the same for every theorem of one (family, n, field, size, repeat)."""
    F = FieldSpec.parse_cli(cell.field)
    sw = cell.sweep
    fam = cell.family
    if fam == "grid":
        return grid_instance(F, cell.size, cell.n)
    if fam == "lines_in_flats":
        per = sw.get("lines_per_flat", 3)
        per = max(2, round(math.sqrt(cell.size))) if per == "sqrt" else int(per)
        cfg = GeneratorConfig(fam, F, cell.n, m=int(sw.get("m", 2)), flats=max(1, cell.size // per),
                              lines_per_flat=per, seed=seed)
    else:
        cfg = GeneratorConfig(fam, F, cell.n, count=cell.size, seed=seed)
    t = generate(cfg)
    return rich_points(t, 2).points, t


def run_cell(cell: Cell, base_seed: int, oracle: str):
    seed = cell_seed(base_seed, cell.family, cell.n, cell.field, cell.size, cell.repeat)
    s, t = build_instance(cell, seed)
    k = int(cell.sweep.get("k", 2))
    r = int(cell.sweep.get("r", 2))
    if cell.theorem == "i0":
        rep = verify_i0(s, t, oracle)
    elif cell.theorem == "i1":
        rep = verify_i1(t, r, k, oracle)
    elif cell.theorem == "r":
        rep = verify_r(s, t, k, oracle)
    elif cell.theorem == "trivial":
        rep = verify_trivial(s, t, k)
    else:
        raise InputError(f"theorem {cell.theorem!r} is not a per-cell check; expected one of {CELL_THEOREMS}")
    return rep, seed, t


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def growth_check(rows: list) -> list:
    """Per (sweep, family, n, p, theorem): max ratio at the largest size vs the smallest."""
    groups = {}
    for row in rows:
        if row["ratio"] in ("", "error"):
            continue
        key = (row["sweep"], row["family"], row["n"], row["p"], row["theorem"])
        groups.setdefault(key, {}).setdefault(int(row["size"]), []).append(float(row["ratio"]))
    out = []
    for key, by_size in sorted(groups.items()):
        sizes = sorted(by_size)
        lo, hi = max(by_size[sizes[0]]), max(by_size[sizes[-1]])
        out.append({"sweep": key[0], "family": key[1], "n": key[2], "p": key[3], "theorem": key[4],
                    "smallest": sizes[0], "largest": sizes[-1], "max_ratio_smallest": lo,
                    "max_ratio_largest": hi, "bounded": hi <= 2 * lo})
    return out


def run_experiment(config: dict, out_dir) -> dict:
    """Write one report per cell, ``summary.csv`` and ``run.json``; return the run summary."""
    out = Path(out_dir)
    (out / "cells").mkdir(parents=True, exist_ok=True)
    base = int(config.get("seed", 0))
    oracle = config.get("oracle", "spanned")
    alarm = float(config.get("alarm", DEFAULT_ALARM))
    rows, errors, breaches = [], [], []
    for idx, cell in enumerate(_cells(config)):
        name = f"{idx:04d}_{cell.family}_{cell.theorem}_n{cell.n}_{cell.field}_{cell.size}_r{cell.repeat}.json"
        row = {"sweep": cell.sweep_index, "family": cell.family, "n": cell.n, "p": cell.field, "size": cell.size, "theorem": cell.theorem}
        try:
            rep, seed, t = run_cell(cell, base, oracle)
        except InputError as exc:
            payload = {"cell": idx, "family": cell.family, "theorem": cell.theorem, "size": cell.size,
                       "field": cell.field, "error": str(exc)}
            errors.append(payload)
            row.update(lhs="", rhs_total="", ratio="error")
        else:
            payload = {"cell": idx, "family": cell.family, "size": cell.size, "seed": seed,
                       "deg_T": t.total_degree, "report": rep.to_json()}
            row.update(lhs=rep.lhs, rhs_total=_fmt(rep.rhs_total), ratio=_fmt(rep.ratio))
            if rep.breaches(alarm):
                breaches.append({"cell": idx, "ratio": rep.ratio})
        (out / "cells" / name).write_text(dumps(payload))
        rows.append(row)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: _fmt(row[k]) for k in CSV_COLUMNS})
    (out / "summary.csv").write_text(buf.getvalue())
    summary = {"name": config.get("name"), "seed": base, "oracle": oracle, "alarm": alarm,
               "cells": len(rows), "errors": errors, "breaches": breaches, "growth": growth_check(rows)}
    (out / "run.json").write_text(dumps(summary))
    return summary


STOCK_CONFIG = {
    "name": "stock",
    "seed": 20261019,
    "oracle": "spanned",
    "alarm": DEFAULT_ALARM,
    "sweeps": [
        {"family": "generic_lines", "ambient_dim": 3, "fields": [101], "sizes": [25, 50, 100, 200],
         "theorems": ["i0", "i1"], "r": 2, "k": 2, "repeats": 4},
        {"family": "lines_in_flats", "ambient_dim": 3, "fields": [101], "sizes": [6, 12, 24, 48],
         "lines_per_flat": 3, "m": 2, "theorems": ["i0", "i1"], "r": 2, "k": 2, "repeats": 2},
        {"family": "lines_in_flats", "ambient_dim": 3, "fields": [101], "sizes": [16, 36, 64, 100],
         "lines_per_flat": "sqrt", "m": 2, "theorems": ["i0", "i1"], "r": 2, "k": 2, "repeats": 2},
    ],
}
