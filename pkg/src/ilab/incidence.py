"""Degree of incidence, rich points, k-freeness and Bezout checks."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import InputError
from .geom import AffineObject, VarietySet, contains, contains_point, intersect_lines
from .mpoly import MultiPoly, restrict_to_line

# assertion slack on the real side of integer-vs-real bound comparisons
BOUND_SLACK = 1e-9


@dataclass
class IncidenceCount:
    total: int
    per_point: dict  # member of S -> number of members of T containing it
    per_member: dict  # member of T -> contained S-degree

    def containing(self):
        return self.per_point


def _check_dims(s: VarietySet, t: VarietySet):
    if s.field != t.field or s.ambient_dim != t.ambient_dim:
        raise InputError("S and T live in different spaces")
    if s.dim is not None and t.dim is not None and t.dim != s.dim + 1:
        raise InputError(f"need dim(T) = dim(S) + 1, got dim(S)={s.dim}, dim(T)={t.dim}")


def incidence_pairs(s: VarietySet, t: VarietySet) -> list:
    """All (s_index, t_index) with s contained in t."""
    _check_dims(s, t)
    F = s.field
    pairs = []
    if s.dim == 0 and t.dim == 1 and F.is_prime and F.p < len(s):
        # walk the p points of each line instead of testing every point
        index = {x.base: i for i, x in enumerate(s.members)}
        for j, ln in enumerate(t.members):
            for c in range(F.p):
                i = index.get(ln.point_at((c,)))
                if i is not None:
                    pairs.append((i, j))
        pairs.sort()
        return pairs
    for i, x in enumerate(s.members):
        if x.dim == 0:
            for j, y in enumerate(t.members):
                if contains_point(y, x.base):
                    pairs.append((i, j))
        else:
            for j, y in enumerate(t.members):
                if contains(y, x):
                    pairs.append((i, j))
    return pairs


def incidence_degree(s: VarietySet, t: VarietySet) -> IncidenceCount:
    """I(S,T) = sum over s of deg(s) * #{t : s in t}, with both aggregations."""
    pairs = incidence_pairs(s, t)
    per_point = {x: 0 for x in s.members}
    per_member = {y: 0 for y in t.members}
    for i, j in pairs:
        x, y = s.members[i], t.members[j]
        per_point[x] += 1
        per_member[y] += x.degree
    total = sum(x.degree * c for x, c in per_point.items())
    if total != sum(per_member.values()):
        raise AssertionError("incidence aggregations disagree")
    return IncidenceCount(total, per_point, per_member)


@dataclass
class RichSet:
    r: int
    points: VarietySet
    multiplicity: dict  # point -> number of distinct lines through it


def line_intersections(t: VarietySet) -> dict:
    """point -> set of indices of the lines through it (only points on >= 2 lines)."""
    if t.dim not in (None, 1):
        raise InputError("rich points are defined here for sets of lines")
    through = defaultdict(set)
    lines = t.members
    for i, j in combinations(range(len(lines)), 2):
        q = intersect_lines(lines[i], lines[j])
        if q is not None:
            through[q].update((i, j))
    return through


def rich_points(t: VarietySet, r: int) -> RichSet:
    """Points of the base field lying on at least r lines of t."""
    if r < 2:
        raise InputError("richness threshold must be >= 2")
    through = line_intersections(t)
    keep = sorted((q for q, ls in through.items() if len(ls) >= r), key=AffineObject.key)
    return RichSet(r, VarietySet(t.field, t.ambient_dim, tuple(keep)), {q: len(through[q]) for q in keep})


@dataclass
class KFreeResult:
    ok: bool
    pair: tuple | None = None  # two members of T
    shared: tuple = ()  # k points of S lying in both

    def __bool__(self):
        return self.ok


def _containers(s: VarietySet, t: VarietySet) -> dict:
    by_point = defaultdict(list)
    for i, j in incidence_pairs(s, t):
        by_point[i].append(j)
    return by_point


def k_free_check(s: VarietySet, t: VarietySet, k: int) -> KFreeResult:
    """Is every k-subset of S inside at most one member of T?"""
    if k < 2:
        raise InputError("k must be >= 2")
    shared = defaultdict(list)
    for i, js in sorted(_containers(s, t).items()):
        for a, b in combinations(sorted(js), 2):
            shared[(a, b)].append(i)
            if len(shared[(a, b)]) >= k:
                pts = tuple(s.members[q] for q in shared[(a, b)][:k])
                return KFreeResult(False, (t.members[a], t.members[b]), pts)
    return KFreeResult(True)


def greedy_k_free(s: VarietySet, t: VarietySet, k: int) -> VarietySet:
    """Maximal k-free subset: scan S in canonical order, keep a point iff freeness survives."""
    if k < 2:
        raise InputError("k must be >= 2")
    cont = _containers(s, t)
    order = sorted(range(len(s)), key=lambda i: s.members[i].key())
    counts = defaultdict(int)
    kept = []
    for i in order:
        prs = list(combinations(sorted(cont.get(i, ())), 2))
        if any(counts[pq] + 1 >= k for pq in prs):
            continue
        for pq in prs:
            counts[pq] += 1
        kept.append(s.members[i])
    return VarietySet(s.field, s.ambient_dim, tuple(kept))


@dataclass
class BezoutResult:
    contained: bool
    count: int | None  # base-field points of Z(f) on l when not contained
    degree: int

    @property
    def holds(self) -> bool:
        return self.contained or self.count <= self.degree


def _rational_roots(coeffs) -> set:
    from sympy import Poly, QQ, symbols

    t = symbols("t")
    return set(Poly(list(reversed(coeffs)), t, domain=QQ).ground_roots())


def base_field_roots(g: MultiPoly) -> set:
    """Distinct roots in the base field of a nonzero univariate polynomial."""
    F = g.field
    coeffs = g.univariate_coeffs()
    if F.is_prime:
        roots = set()
        for c in range(F.p):
            acc = 0
            for a in reversed(coeffs):
                acc = (acc * c + a) % F.p
            if not acc:
                roots.add(c)
        return roots
    if len(coeffs) <= 1:
        return set()
    return {Fraction(int(r.p), int(r.q)) for r in _rational_roots(coeffs)}


def bezout_line_check(l: AffineObject, f: MultiPoly) -> BezoutResult:
    """Either l lies in Z(f), or it meets Z(f) in at most deg f base-field points."""
    g = restrict_to_line(f, l)
    deg = f.total_degree
    if g.is_zero:
        return BezoutResult(True, None, deg)
    return BezoutResult(False, len(base_field_roots(g)), deg)


def trivial_bound(s_count: int, t_count: int, k: int) -> float:
    """2|S||T|^(1-1/k) + (k-1)|T|, valid for k-free S."""
    if k < 2:
        raise InputError("k must be >= 2")
    if s_count < 0 or t_count < 0:
        raise InputError("counts must be nonnegative")
    return 2 * s_count * t_count ** (1 - 1 / k) + (k - 1) * t_count
