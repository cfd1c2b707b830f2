"""Concentration parameters D_m(T) = max deg(T_W)/deg(W) over m-dimensional W.

Containers are restricted to flats (degree 1) and, for ``union_greedy``,
unions of distinct flats (degree = number of flats).  Three oracles:

spanned
    spans of small member subsets, completed to dimension m when short;
exhaustive
    every m-flat of F_p^n, grouped by direction space;
union_greedy
    prefixes of a greedy, T-disjoint sequence of spanned candidates.

``brute_force_reference`` is an independent check for tiny instances: it
works on explicit point sets and never touches the linear-algebra kernel.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import InputError, SizeLimitError
from .geom import (AffineObject, VarietySet, _count_flats, _reduce, contains,
                   extend_to_dim, span_of)

ORACLES = ("spanned", "exhaustive", "union_greedy")
EXHAUSTIVE_CEILING = 2_000_000


@dataclass
class ConcentrationEstimate:
    m: int
    value: Fraction
    witness: tuple  # one flat, or several for a union
    oracle: str
    candidates: int = 0

    @property
    def witness_degree(self) -> int:
        return len(self.witness)


def _check(t: VarietySet, m: int):
    n = t.ambient_dim
    if not 0 <= m <= n:
        raise InputError(f"container dimension {m} outside 0..{n}")
    if t.dim is not None and t.dim > m:
        raise InputError(f"members have dimension {t.dim} > m = {m}")


def _origin_flat(t: VarietySet, m: int) -> AffineObject:
    F, n = t.field, t.ambient_dim
    return extend_to_dim(AffineObject.point(F, [0] * n), m)


def _count_in(w: AffineObject, members) -> int:
    return sum(x.degree for x in members if contains(w, x))


def spanned_candidates(t: VarietySet, m: int) -> list:
    """[(flat, deg(T_flat))] for spans of member subsets, extended to dimension m."""
    _check(t, m)
    if not t.members:
        return []
    members = t.members
    d = t.dim
    levels = {span_of([x]) for x in members}
    seen = set(levels)
    frontier = levels
    for _ in range(m - d):
        nxt = set()
        for w in frontier:
            if w.dim >= m:
                continue
            for x in members:
                if contains(w, x):
                    continue
                u = span_of([w, x])
                if u.dim <= m and u not in seen:
                    seen.add(u)
                    nxt.add(u)
        frontier = nxt
        if not frontier:
            break
    flats = {extend_to_dim(w, m) for w in seen if w.dim <= m}
    return sorted(((w, _count_in(w, members)) for w in flats), key=lambda c: (-c[1], c[0].key()))


def _best(cands):
    """Highest count, ties broken by canonical encoding."""
    return min(cands, key=lambda c: (-c[1], c[0].key()))


def _spanned(t, m):
    cands = spanned_candidates(t, m)
    if not cands:
        return ConcentrationEstimate(m, Fraction(0), (_origin_flat(t, m),), "spanned", 0)
    w, c = _best(cands)
    return ConcentrationEstimate(m, Fraction(c), (w,), "spanned", len(cands))


def _union_greedy(t, m):
    cands = spanned_candidates(t, m)
    if not cands:
        return ConcentrationEstimate(m, Fraction(0), (_origin_flat(t, m),), "union_greedy", 0)
    covered = set()
    chosen = []
    total = 0
    best = None
    for w, _ in cands:
        inside = [x for x in t.members if contains(w, x) and x not in covered]
        if not inside or any(contains(w, x) for x in covered):
            continue
        covered.update(inside)
        chosen.append(w)
        total += sum(x.degree for x in inside)
        ratio = Fraction(total, len(chosen))
        if best is None or ratio > best[0]:
            best = (ratio, tuple(chosen))
    return ConcentrationEstimate(m, best[0], best[1], "union_greedy", len(cands))


def _subspaces_rref(p: int, n: int, m: int):
    """Every m-dim subspace of F_p^n as (RREF rows, pivot columns)."""
    for piv in itertools.combinations(range(n), m):
        free = [(i, j) for i, c in enumerate(piv) for j in range(c + 1, n) if j not in piv]
        for vals in itertools.product(range(p), repeat=len(free)):
            rows = [[0] * n for _ in range(m)]
            for i, c in enumerate(piv):
                rows[i][c] = 1
            for (i, j), v in zip(free, vals):
                rows[i][j] = v
            yield [tuple(r) for r in rows], piv


def _exhaustive(t, m, ceiling):
    F, n = t.field, t.ambient_dim
    if not F.is_prime:
        raise InputError("exhaustive enumeration needs a finite field")
    total = _count_flats(F.p, n, m)
    if total > ceiling:
        raise SizeLimitError(f"{total} {m}-flats in {F}^{n} exceed the exhaustive ceiling {ceiling}")
    best = None
    for rows, piv in _subspaces_rref(F.p, n, m):
        groups = Counter()
        for x in t.members:
            if all(not any(_reduce(F, v, rows, piv)) for v in x.basis):
                groups[tuple(_reduce(F, x.base, rows, piv))] += x.degree
        if groups:
            cand = [(AffineObject.make(F, base, rows), c) for base, c in groups.items()]
        else:
            cand = [(AffineObject.make(F, [0] * n, rows), 0)]
        top = _best(cand)
        if best is None or (-top[1], top[0].key()) < (-best[1], best[0].key()):
            best = top
    return ConcentrationEstimate(m, Fraction(best[1]), (best[0],), "exhaustive", total)


def concentration(t: VarietySet, m: int, oracle: str = "spanned", ceiling: int = EXHAUSTIVE_CEILING) -> ConcentrationEstimate:
    _check(t, m)
    if oracle not in ORACLES:
        raise InputError(f"unknown oracle {oracle!r}; expected one of {ORACLES}")
    n = t.ambient_dim
    if m == n:
        whole = AffineObject.whole_space(t.field, n)
        return ConcentrationEstimate(m, Fraction(t.total_degree), (whole,), oracle, 1)
    if oracle == "spanned":
        return _spanned(t, m)
    if oracle == "union_greedy":
        return _union_greedy(t, m)
    return _exhaustive(t, m, ceiling)


def concentration_profile(t: VarietySet, oracle: str = "spanned", m_min: int | None = None) -> list:
    """Estimates for m = m_min..n (m_min defaults to dim(T) + 1)."""
    d = t.dim if t.dim is not None else 0
    lo = d + 1 if m_min is None else m_min
    return [concentration(t, m, oracle) for m in range(max(lo, d), t.ambient_dim + 1)]


# independent reference ---------------------------------------------------------

BRUTE_LIMITS = {"members": 8, "p": 7, "n": 3}


@lru_cache(maxsize=None)
def _all_flats_as_point_sets(p: int, n: int, m: int) -> tuple:
    """Every m-flat of F_p^n as (frozenset of points, base, generators)."""
    def add(u, v):
        return tuple((a + b) % p for a, b in zip(u, v))

    def scale(c, v):
        return tuple(c * a % p for a in v)

    origin = (0,) * n
    vectors = [v for v in itertools.product(range(p), repeat=n) if any(v)]
    layer = {frozenset([origin]): ()}
    for _ in range(m):
        nxt = {}
        for pts, gens in layer.items():
            for v in vectors:
                if v in pts:
                    continue
                grown = frozenset(add(x, scale(c, v)) for x in pts for c in range(p))
                nxt.setdefault(grown, gens + (v,))
        layer = nxt
    flats = {}
    for pts, gens in layer.items():
        for x in itertools.product(range(p), repeat=n):
            shifted = frozenset(add(x, y) for y in pts)
            if shifted not in flats:
                flats[shifted] = (x, gens)
    return tuple((pts, x, gens) for pts, (x, gens) in flats.items())


def _member_points(o: AffineObject, p: int) -> frozenset:
    out = set()
    for cs in itertools.product(range(p), repeat=o.dim):
        pt = list(o.base)
        for c, v in zip(cs, o.basis):
            pt = [(a + c * b) % p for a, b in zip(pt, v)]
        out.add(tuple(pt))
    return frozenset(out)


def brute_force_reference(t: VarietySet, m: int) -> ConcentrationEstimate:
    """Max over every m-flat of F_p^n, by explicit point-set inclusion."""
    _check(t, m)
    F, n = t.field, t.ambient_dim
    if not F.is_prime:
        raise InputError("brute force needs a finite field")
    if len(t) > BRUTE_LIMITS["members"] or F.p > BRUTE_LIMITS["p"] or n > BRUTE_LIMITS["n"]:
        raise SizeLimitError(f"brute force is limited to {BRUTE_LIMITS}")
    pts = [_member_points(x, F.p) for x in t.members]
    best = None
    for flat_pts, x, gens in _all_flats_as_point_sets(F.p, n, m):
        c = sum(1 for s in pts if s <= flat_pts)
        if best is None or c > best[0]:
            best = (c, x, gens)
    c, x, gens = best
    return ConcentrationEstimate(m, Fraction(c), (AffineObject.make(F, x, gens),), "brute_force",
                                 len(_all_flats_as_point_sets(F.p, n, m)))
