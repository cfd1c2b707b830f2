"""Command line entry point: ``ilab <command> ...``.

Exit codes: 0 success, 1 verification violation, 2 input error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ..concentrate import ORACLES, concentration
from ..errors import InputError, VerificationError
from ..exactfield import FieldSpec
from ..geom import GeneratorConfig, generate, grid_instance, objects_from_json, set_from_json, set_to_json
from ..incidence import incidence_degree, k_free_check, rich_points
from ..partition import partition_iterate
from ..vanish import min_vanishing_degree, relative_degree, vanishing_poly
from .experiment import STOCK_CONFIG, run_experiment
from .report import (conc_to_json, dumps, incidence_to_json, relative_to_json, rich_to_json,
                     trace_to_json, vanish_to_json)
from .suites import verify_bezout_suite, verify_cii_suite
from .verify import DEFAULT_ALARM, verify_i0, verify_i1, verify_r, verify_trivial

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2


def _load(path):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _load_set(path, field=None):
    vs = set_from_json(_load(path))
    if field is not None and vs.field != field:
        raise InputError(f"{path} is over {vs.field}, expected {field}")
    return vs


def _emit(data, out):
    text = dumps(data)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _field(args):
    return FieldSpec.parse_cli(args.field) if args.field is not None else None


def cmd_gen(args):
    F = _field(args) or FieldSpec.prime(7)
    if args.family == "grid":
        pts, lines = grid_instance(F, args.grid_side, args.n)
        vs = lines if args.with_lines else pts
    else:
        cfg = GeneratorConfig(args.family, F, args.n, count=args.count, m=args.m, flats=args.flats,
                              lines_per_flat=args.lines_per_flat, grid_side=args.grid_side,
                              with_lines=args.with_lines, seed=args.seed)
        vs = generate(cfg)
    _emit(set_to_json(vs), args.out)
    return EXIT_OK


def cmd_incidence(args):
    F = _field(args)
    s, t = _load_set(args.s, F), _load_set(args.t, F)
    inc = incidence_degree(s, t)
    kf = k_free_check(s, t, args.k) if args.k else None
    _emit(incidence_to_json(inc, kf), args.out)
    return EXIT_OK


def cmd_rich(args):
    t = _load_set(args.t, _field(args))
    _emit(rich_to_json(rich_points(t, args.r)), args.out)
    return EXIT_OK


def cmd_vanish(args):
    t = _load_set(args.t, _field(args))
    if args.avoid:
        _, _, ws = objects_from_json(_load(args.avoid))
        _emit(relative_to_json(relative_degree(t, ws, args.max_degree)), args.out)
    elif args.degree is not None:
        _emit(vanish_to_json(vanishing_poly(t, args.degree)), args.out)
    else:
        _emit(vanish_to_json(min_vanishing_degree(t)), args.out)
    return EXIT_OK


def cmd_conc(args):
    t = _load_set(args.t, _field(args))
    _emit(conc_to_json(concentration(t, args.m, args.oracle)), args.out)
    return EXIT_OK


def cmd_partition(args):
    F = _field(args)
    s, t = _load_set(args.s, F), _load_set(args.t, F)
    budget = args.budget if args.budget == "relative" else int(args.budget)
    _emit(trace_to_json(partition_iterate(s, t, args.tau, budget, seed=args.seed)), args.out)
    return EXIT_OK


def cmd_verify(args):
    th = args.theorem
    if th == "cii":
        summ = verify_cii_suite(args.instances, args.seed, dims=(2, 3, 4), primes=(7, 11, 13))
        _emit(summ.to_json(), args.out)
        return EXIT_VIOLATION if summ.violations else EXIT_OK
    if th == "bezout_suite":
        summ = verify_bezout_suite(args.instances, args.seed)
        _emit(summ.to_json(), args.out)
        return EXIT_VIOLATION if summ.violations else EXIT_OK
    F = _field(args)
    t = _load_set(args.t, F)
    if th == "i1":
        rep = verify_i1(t, args.r, args.k, args.oracle)
    else:
        if not args.s:
            raise InputError(f"{th} needs --s")
        s = _load_set(args.s, F)
        if th == "i0":
            rep = verify_i0(s, t, args.oracle)
        elif th == "r":
            rep = verify_r(s, t, args.k, args.oracle)
        else:
            rep = verify_trivial(s, t, args.k)
    _emit(rep.to_json(), args.out)
    return EXIT_VIOLATION if rep.breaches(args.alarm) else EXIT_OK


def cmd_experiment(args):
    config = _load(args.config) if args.config else STOCK_CONFIG
    if args.seed is not None and args.config is None:
        config = dict(config, seed=args.seed)
    if args.oracle:
        config = dict(config, oracle=args.oracle)
    out = args.out or "ilab_run"
    summary = run_experiment(config, out)
    sys.stdout.write(dumps({"out": str(out), "cells": summary["cells"], "errors": len(summary["errors"]),
                            "breaches": len(summary["breaches"])}))
    return EXIT_VIOLATION if summary["breaches"] else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", help="prime p or Q (checked against input files)")
    common.add_argument("--out", help="output path (stdout if omitted)")
    common.add_argument("--oracle", choices=ORACLES, default=None)
    common.add_argument("--seed", type=int, default=None)

    p = argparse.ArgumentParser(prog="ilab", description="exact incidence geometry lab")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="generate a configuration")
    g.add_argument("--family", required=True,
                   choices=["generic_lines", "lines_in_flats", "grid", "concurrent_bundle", "direction_cover"])
    g.add_argument("--n", type=int, default=3)
    g.add_argument("--count", type=int, default=0)
    g.add_argument("--m", type=int, default=2)
    g.add_argument("--flats", type=int, default=0)
    g.add_argument("--lines-per-flat", type=int, default=0)
    g.add_argument("--grid-side", type=int, default=0)
    g.add_argument("--with-lines", action="store_true")
    g.set_defaults(func=cmd_gen)

    i = sub.add_parser("incidence", parents=[common], help="I(S,T)")
    i.add_argument("--s", required=True)
    i.add_argument("--t", required=True)
    i.add_argument("--k", type=int, default=0, help="also check k-freeness")
    i.set_defaults(func=cmd_incidence)

    r = sub.add_parser("rich", parents=[common], help="r-rich points of a line set")
    r.add_argument("--t", required=True)
    r.add_argument("--r", type=int, default=2)
    r.set_defaults(func=cmd_rich)

    v = sub.add_parser("vanish", parents=[common], help="vanishing polynomials and relative degree")
    v.add_argument("--t", required=True)
    v.add_argument("--degree", type=int)
    v.add_argument("--max-degree", type=int)
    v.add_argument("--avoid", help="flats that the witness must not vanish on")
    v.set_defaults(func=cmd_vanish)

    c = sub.add_parser("conc", parents=[common], help="concentration D_m")
    c.add_argument("--t", required=True)
    c.add_argument("--m", type=int, required=True)
    c.set_defaults(func=cmd_conc)

    pt = sub.add_parser("partition", parents=[common], help="iterated polynomial splitting")
    pt.add_argument("--s", required=True)
    pt.add_argument("--t", required=True)
    pt.add_argument("--tau", type=float, default=0.4)
    pt.add_argument("--budget", default="relative")
    pt.set_defaults(func=cmd_partition)

    vf = sub.add_parser("verify", parents=[common], help="check one bound or run a suite")
    vf.add_argument("--theorem", required=True, choices=["i0", "i1", "r", "trivial", "cii", "bezout_suite"])
    vf.add_argument("--s")
    vf.add_argument("--t")
    vf.add_argument("--r", type=int, default=2)
    vf.add_argument("--k", type=int, default=2)
    vf.add_argument("--instances", type=int, default=1000)
    vf.add_argument("--alarm", type=float, default=DEFAULT_ALARM)
    vf.set_defaults(func=cmd_verify)

    e = sub.add_parser("experiment", parents=[common], help="run an experiment config")
    e.add_argument("--config", help="JSON config (stock sweep if omitted)")
    e.set_defaults(func=cmd_experiment)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command not in ("experiment",):
        if args.seed is None:
            args.seed = 0
        if args.oracle is None:
            args.oracle = "spanned"
    if args.command == "verify" and args.theorem not in ("cii", "bezout_suite") and not args.t:
        print("ilab: error: --t is required", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except VerificationError as exc:
        print(f"ilab: verification failed: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except InputError as exc:
        print(f"ilab: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
