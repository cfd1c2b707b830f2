"""Points, lines and flats in K^n, in canonical form.

A flat is stored as ``base + span(basis)``.  The canonical form takes the
basis to be the reduced row-echelon form of the direction space and
reduces the base so it is zero in every pivot coordinate; two flats are
equal as point sets exactly when their canonical encodings coincide.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InputError
from .exactfield import FieldSpec, rref_rows

KINDS = ("point", "line", "flat")
FAMILIES = ("generic_lines", "lines_in_flats", "grid", "concurrent_bundle", "direction_cover")


def _kind(dim: int) -> str:
    return "point" if dim == 0 else "line" if dim == 1 else "flat"


def _reduce(F: FieldSpec, v, basis, pivots):
    """Reduce ``v`` modulo the span of an RREF basis."""
    v = list(v)
    for row, pc in zip(basis, pivots):
        c = v[pc]
        if c:
            v = [F.sub(a, F.mul(c, b)) if b else a for a, b in zip(v, row)]
    return v


@dataclass(frozen=True)
class AffineObject:
    field: FieldSpec
    ambient_dim: int
    base: tuple
    basis: tuple = ()
    pivots: tuple = dc_field(default=(), compare=False, repr=False)

    @classmethod
    def make(cls, F: FieldSpec, base: Sequence, basis: Sequence[Sequence] = ()) -> "AffineObject":
        n = len(base)
        if n == 0:
            raise InputError("ambient dimension must be positive")
        base = [F(x) for x in base]
        vecs = [[F(x) for x in v] for v in basis]
        if any(len(v) != n for v in vecs):
            raise InputError("direction vectors must match the ambient dimension")
        if vecs:
            red, piv = rref_rows(F, vecs, n)
            if len(piv) != len(vecs):
                raise InputError("direction vectors are linearly dependent")
            red = [tuple(r) for r in red[: len(piv)]]
        else:
            red, piv = [], []
        base = _reduce(F, base, red, piv)
        return cls(F, n, tuple(base), tuple(red), tuple(piv))

    @classmethod
    def point(cls, F: FieldSpec, coords: Sequence) -> "AffineObject":
        return cls.make(F, coords)

    @classmethod
    def line(cls, F: FieldSpec, base: Sequence, direction: Sequence) -> "AffineObject":
        return cls.make(F, base, [direction])

    @classmethod
    def flat(cls, F: FieldSpec, base: Sequence, basis: Sequence[Sequence]) -> "AffineObject":
        return cls.make(F, base, basis)

    @classmethod
    def whole_space(cls, F: FieldSpec, n: int) -> "AffineObject":
        return cls.make(F, [0] * n, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def kind(self) -> str:
        return _kind(self.dim)

    @property
    def degree(self) -> int:
        return 1

    @property
    def direction(self) -> tuple:
        if self.dim != 1:
            raise InputError(f"{self.kind} has no single direction")
        return self.basis[0]

    def key(self) -> tuple:
        """Total order used for sorting and tie-breaks."""
        return (self.dim, self.base, self.basis)

    def point_at(self, params: Sequence) -> tuple:
        F = self.field
        out = list(self.base)
        for c, v in zip(params, self.basis):
            c = F(c)
            if c:
                out = [F.add(a, F.mul(c, b)) for a, b in zip(out, v)]
        return tuple(out)

    def __str__(self):
        fmt = self.field.format
        b = "(" + ",".join(fmt(x) for x in self.base) + ")"
        if not self.basis:
            return b
        dirs = " ".join("(" + ",".join(fmt(x) for x in v) + ")" for v in self.basis)
        return f"{self.kind}[{b} + <{dirs}>]"


def _check_same_space(a: AffineObject, b: AffineObject):
    if a.field != b.field or a.ambient_dim != b.ambient_dim:
        raise InputError(f"objects live in different spaces ({a.field}^{a.ambient_dim} vs {b.field}^{b.ambient_dim})")


def in_span(outer: AffineObject, v: Sequence) -> bool:
    """Is the direction ``v`` parallel to ``outer``?"""
    return not any(_reduce(outer.field, v, outer.basis, outer.pivots))


def contains(outer: AffineObject, inner: AffineObject) -> bool:
    _check_same_space(outer, inner)
    if inner.dim > outer.dim:
        return False
    F = outer.field
    diff = [F.sub(a, b) for a, b in zip(inner.base, outer.base)]
    if not in_span(outer, diff):
        return False
    return all(in_span(outer, v) for v in inner.basis)


def contains_point(outer: AffineObject, coords: Sequence) -> bool:
    F = outer.field
    return in_span(outer, [F.sub(a, b) for a, b in zip(coords, outer.base)])


def intersect_lines(a: AffineObject, b: AffineObject) -> AffineObject | None:
    """Unique common point of two distinct lines, or None if parallel or skew."""
    _check_same_space(a, b)
    if a.dim != 1 or b.dim != 1:
        raise InputError("intersect_lines expects two lines")
    if a == b:
        raise InputError("identical lines have no unique intersection")
    if a.basis == b.basis:
        return None
    F = a.field
    d1, d2 = a.basis[0], b.basis[0]
    rhs = [F.sub(y, x) for x, y in zip(a.base, b.base)]
    n = a.ambient_dim
    # s*d1 - t*d2 = rhs; find a nonsingular 2x2 minor and solve by Cramer
    for i in range(n):
        for j in range(i + 1, n):
            det = F.sub(F.mul(d1[j], d2[i]), F.mul(d1[i], d2[j]))
            if not det:
                continue
            s = F.div(F.sub(F.mul(rhs[j], d2[i]), F.mul(rhs[i], d2[j])), det)
            pt = [F.add(x, F.mul(s, d)) for x, d in zip(a.base, d1)]
            return AffineObject.make(F, pt) if contains_point(b, pt) else None
    return None  # unreachable for distinct directions


def span_of(objects: Sequence[AffineObject]) -> AffineObject:
    """Smallest flat containing every input."""
    if not objects:
        raise InputError("span of an empty list")
    first = objects[0]
    for o in objects[1:]:
        _check_same_space(first, o)
    F = first.field
    vecs = []
    for o in objects:
        vecs.extend(o.basis)
        if o is not first:
            vecs.append([F.sub(a, b) for a, b in zip(o.base, first.base)])
    n = first.ambient_dim
    if vecs:
        red, piv = rref_rows(F, vecs, n)
        vecs = red[: len(piv)]
    return AffineObject.make(F, first.base, vecs)


def extend_to_dim(w: AffineObject, m: int) -> AffineObject:
    """Complete ``w`` to an m-flat by adding coordinate directions in index order."""
    if w.dim >= m:
        return w
    F = w.field
    basis = [list(v) for v in w.basis]
    cur = w
    for i in range(w.ambient_dim):
        if cur.dim == m:
            break
        e = [F.one if j == i else F.zero for j in range(w.ambient_dim)]
        if not in_span(cur, e):
            basis.append(e)
            cur = AffineObject.make(F, w.base, basis)
    return cur


@dataclass(frozen=True)
class VarietySet:
    field: FieldSpec
    ambient_dim: int
    members: tuple = ()

    @classmethod
    def of(cls, F: FieldSpec, n: int, members: Iterable[AffineObject] = ()) -> "VarietySet":
        seen = set()
        out = []
        dim = None
        for m in members:
            if m.field != F or m.ambient_dim != n:
                raise InputError(f"member {m} is not in {F}^{n}")
            if dim is None:
                dim = m.dim
            elif m.dim != dim:
                raise InputError("all members of a set must share one dimension")
            if m not in seen:
                seen.add(m)
                out.append(m)
        return cls(F, n, tuple(out))

    @property
    def dim(self) -> int | None:
        return self.members[0].dim if self.members else None

    @property
    def kind(self) -> str | None:
        return self.members[0].kind if self.members else None

    @property
    def total_degree(self) -> int:
        return sum(m.degree for m in self.members)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, item):
        return item in set(self.members)

    def subset(self, members: Iterable[AffineObject]) -> "VarietySet":
        return VarietySet.of(self.field, self.ambient_dim, members)

    def minus(self, other: Iterable[AffineObject]) -> "VarietySet":
        drop = set(other)
        return VarietySet(self.field, self.ambient_dim, tuple(m for m in self.members if m not in drop))

    def sorted(self) -> "VarietySet":
        return VarietySet(self.field, self.ambient_dim, tuple(sorted(self.members, key=AffineObject.key)))


def restrict_to(ts: VarietySet, w: AffineObject) -> VarietySet:
    """Members of ``ts`` lying inside ``w``."""
    return VarietySet(ts.field, ts.ambient_dim, tuple(t for t in ts.members if contains(w, t)))


# generators ------------------------------------------------------------------


@dataclass(frozen=True)
class GeneratorConfig:
    family: str
    field: FieldSpec
    ambient_dim: int
    count: int = 0
    m: int = 2
    flats: int = 0
    lines_per_flat: int = 0
    grid_side: int = 0
    with_lines: bool = False
    seed: int = 0
    coord_range: int = 50  # |coordinate| bound for rational draws

    def to_json(self) -> dict:
        return {
            "family": self.family, "field": self.field.to_json(), "ambient_dim": self.ambient_dim,
            "count": self.count, "m": self.m, "flats": self.flats, "lines_per_flat": self.lines_per_flat,
            "grid_side": self.grid_side, "with_lines": self.with_lines, "seed": self.seed,
        }


class _Draw:
    def __init__(self, F: FieldSpec, seed: int, coord_range: int):
        self.F = F
        self.rng = random.Random(seed)
        self.R = coord_range

    def scalar(self):
        if self.F.is_prime:
            return self.rng.randrange(self.F.p)
        return Fraction(self.rng.randint(-self.R, self.R))

    def vector(self, n):
        return [self.scalar() for _ in range(n)]

    def nonzero(self, n):
        while True:
            v = self.vector(n)
            if any(v):
                return v


def _count_flats(p: int, n: int, m: int) -> int:
    """Number of m-flats in AG(n, p): Gaussian binomial times p^(n-m)."""
    num = den = 1
    for i in range(m):
        num *= p ** (n - i) - 1
        den *= p ** (m - i) - 1
    return num // den * p ** (n - m)


FLAT_RESTARTS = 8


def _retry_limit(k: int) -> int:
    return 200 * (k + 1) + 1000


def generate(cfg: GeneratorConfig) -> VarietySet:
    """Deterministic configuration for ``cfg``; see ``FAMILIES``."""
    F, n = cfg.field, cfg.ambient_dim
    if n < 1:
        raise InputError("ambient_dim must be positive")
    draw = _Draw(F, cfg.seed, cfg.coord_range)
    fam = cfg.family
    if fam == "generic_lines":
        return _generic_lines(draw, n, cfg.count)
    if fam == "lines_in_flats":
        return lines_in_flats(draw, n, cfg.m, cfg.flats, cfg.lines_per_flat)[0]
    if fam == "grid":
        pts, lines = _grid(F, n, cfg.grid_side)
        return lines if cfg.with_lines else pts
    if fam == "concurrent_bundle":
        return _concurrent_bundle(draw, n, cfg.count)
    if fam == "direction_cover":
        return _direction_cover(draw, n)
    raise InputError(f"unknown family {fam!r}; expected one of {FAMILIES}")


def _generic_lines(draw: _Draw, n: int, count: int) -> VarietySet:
    F = draw.F
    if n < 2 and count > 1:
        raise InputError("only one line exists in K^1")
    if F.is_prime and count > _count_flats(F.p, n, 1):
        raise InputError(f"{count} distinct lines requested but {F}^{n} has only {_count_flats(F.p, n, 1)}")
    out, seen = [], set()
    tries = 0
    while len(out) < count:
        tries += 1
        if tries > _retry_limit(count):
            raise InputError("could not draw enough distinct lines")
        ln = AffineObject.make(F, draw.vector(n), [draw.nonzero(n)])
        if ln not in seen:
            seen.add(ln)
            out.append(ln)
    return VarietySet(F, n, tuple(out))


def _random_flat(draw: _Draw, n: int, m: int) -> AffineObject:
    while True:
        try:
            return AffineObject.make(draw.F, draw.vector(n), [draw.nonzero(n) for _ in range(m)])
        except InputError:
            continue


def lines_in_flats(draw: _Draw, n: int, m: int, flats: int, per_flat: int):
    """Lines placed inside random m-flats; returns (lines, flats).

    Besides lying in its designated flat, every line avoids the other flats,
    misses the lines of the other flats, and passes through no existing
    intersection point of its own flat (no three concurrent).  Lines of one
    flat are pairwise non-parallel whenever the flat has enough directions.
    """
    F = draw.F
    if not (2 <= m < n):
        raise InputError(f"flat dimension m must satisfy 2 <= m < n, got m={m}, n={n}")
    if flats < 0 or per_flat < 0:
        raise InputError("counts must be nonnegative")
    if F.is_prime:
        if flats > _count_flats(F.p, n, m):
            raise InputError(f"{flats} distinct {m}-flats requested, {F}^{n} has {_count_flats(F.p, n, m)}")
        if per_flat > _count_flats(F.p, m, 1):
            raise InputError(f"{per_flat} lines per flat requested, an {m}-flat over {F} holds {_count_flats(F.p, m, 1)}")
    # a greedy placement can paint itself into a corner on small fields; start over with fresh flats
    for _ in range(FLAT_RESTARTS - 1):
        try:
            return _place_in_flats(draw, n, m, flats, per_flat)
        except InputError:
            continue
    return _place_in_flats(draw, n, m, flats, per_flat)


def _place_in_flats(draw: _Draw, n: int, m: int, flats: int, per_flat: int):
    F = draw.F
    planes: list[AffineObject] = []
    tries = 0
    while len(planes) < flats:
        tries += 1
        if tries > _retry_limit(flats):
            raise InputError("could not draw enough distinct flats")
        w = _random_flat(draw, n, m)
        if w not in planes:
            planes.append(w)
    lines: list[AffineObject] = []
    owner: list[int] = []
    no_parallel = not F.is_prime or per_flat <= (F.p ** m - 1) // (F.p - 1)
    for wi, w in enumerate(planes):
        mine: list[AffineObject] = []
        hubs: set = set()
        tries = 0
        while len(mine) < per_flat:
            tries += 1
            if tries > 50 * (per_flat + 1) + 200:
                raise InputError(f"could not place {per_flat} non-degenerate lines in flat {wi}")
            base = w.point_at(draw.vector(m))
            coef = draw.nonzero(m)
            direction = [F.zero] * n
            for c, v in zip(coef, w.basis):
                direction = [F.add(a, F.mul(F(c), b)) for a, b in zip(direction, v)]
            ln = AffineObject.make(F, base, [direction])
            if ln in mine or any(contains(o, ln) for j, o in enumerate(planes) if j != wi):
                continue
            if no_parallel and any(o.basis == ln.basis for o in mine):
                continue
            if any(intersect_lines(ln, o) is not None for o, j in zip(lines, owner) if j != wi):
                continue
            pts = [intersect_lines(ln, o) for o in mine]
            if any(q is not None and q in hubs for q in pts):
                continue
            hubs.update(q for q in pts if q is not None)
            mine.append(ln)
        lines.extend(mine)
        owner.extend([wi] * len(mine))
    return VarietySet(F, n, tuple(lines)), planes


def _grid(F: FieldSpec, n: int, g: int):
    if n < 2:
        raise InputError("grid needs ambient_dim >= 2")
    if g < 1:
        raise InputError("grid side must be positive")
    if F.is_prime and g > F.p:
        raise InputError(f"grid side {g} exceeds field size {F.p}")
    pad = [0] * (n - 2)
    pts = [AffineObject.point(F, [i, j] + pad) for i in range(g) for j in range(g)]
    e1 = [1, 0] + pad
    e2 = [0, 1] + pad
    lines = [AffineObject.line(F, [0, j] + pad, e1) for j in range(g)]
    lines += [AffineObject.line(F, [i, 0] + pad, e2) for i in range(g)]
    return VarietySet(F, n, tuple(pts)), VarietySet(F, n, tuple(lines))


def grid_instance(F: FieldSpec, g: int, n: int = 2):
    """The g x g point grid and its 2g axis-parallel lines."""
    return _grid(F, n, g)


def _concurrent_bundle(draw: _Draw, n: int, k: int) -> VarietySet:
    F = draw.F
    if n < 2 and k > 1:
        raise InputError("concurrent lines need ambient_dim >= 2")
    if F.is_prime and k > (F.p**n - 1) // (F.p - 1):
        raise InputError(f"{k} directions requested, {F}^{n} has {(F.p ** n - 1) // (F.p - 1)}")
    center = draw.vector(n)
    out, seen = [], set()
    tries = 0
    while len(out) < k:
        tries += 1
        if tries > _retry_limit(k):
            raise InputError("could not draw enough directions")
        ln = AffineObject.line(F, center, draw.nonzero(n))
        if ln not in seen:
            seen.add(ln)
            out.append(ln)
    return VarietySet(F, n, tuple(out))


def _direction_cover(draw: _Draw, n: int) -> VarietySet:
    F = draw.F
    if not F.is_prime:
        raise InputError("direction_cover needs a prime field")
    if n < 2:
        raise InputError("direction_cover needs ambient_dim >= 2")
    pad = [0] * (n - 2)
    dirs = [[1, a] + pad for a in range(F.p)] + [[0, 1] + pad]
    out = []
    for d in dirs:
        base = draw.vector(2) + pad
        out.append(AffineObject.line(F, base, d))
    return VarietySet(F, n, tuple(out))


# JSON ------------------------------------------------------------------------


def object_to_json(o: AffineObject) -> dict:
    fmt = o.field.format
    if o.dim == 0:
        return {"kind": "point", "coords": [fmt(x) for x in o.base]}
    if o.dim == 1:
        return {"kind": "line", "base": [fmt(x) for x in o.base], "dir": [fmt(x) for x in o.basis[0]]}
    return {"kind": "flat", "dim": o.dim, "base": [fmt(x) for x in o.base], "basis": [[fmt(x) for x in v] for v in o.basis]}


def object_from_json(F: FieldSpec, data: dict) -> AffineObject:
    try:
        kind = data["kind"]
        if kind == "point":
            return AffineObject.point(F, [F.parse(x) for x in data["coords"]])
        if kind == "line":
            return AffineObject.line(F, [F.parse(x) for x in data["base"]], [F.parse(x) for x in data["dir"]])
        if kind == "flat":
            basis = [[F.parse(x) for x in v] for v in data["basis"]]
            o = AffineObject.flat(F, [F.parse(x) for x in data["base"]], basis)
            if "dim" in data and int(data["dim"]) != o.dim:
                raise InputError(f"flat declares dim {data['dim']} but spans {o.dim}")
            return o
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed object {data!r}") from exc
    raise InputError(f"unknown object kind {data.get('kind')!r}")


def objects_to_json(F: FieldSpec, n: int, objects: Iterable[AffineObject]) -> dict:
    objs = sorted(set(objects), key=AffineObject.key)
    return {"field": F.to_json(), "ambient_dim": n, "objects": [object_to_json(o) for o in objs]}


def set_to_json(vs: VarietySet) -> dict:
    return objects_to_json(vs.field, vs.ambient_dim, vs.members)


def objects_from_json(data: dict):
    """Returns (field, ambient_dim, canonical deduplicated objects)."""
    try:
        F = FieldSpec.from_json(data["field"])
        n = int(data["ambient_dim"])
        raw = data["objects"]
    except (KeyError, TypeError) as exc:
        raise InputError("object-set JSON needs field, ambient_dim and objects") from exc
    out, seen = [], set()
    for item in raw:
        o = object_from_json(F, item)
        if o.ambient_dim != n:
            raise InputError(f"object {item!r} is not in dimension {n}")
        if o not in seen:
            seen.add(o)
            out.append(o)
    return F, n, out


def set_from_json(data: dict) -> VarietySet:
    F, n, objs = objects_from_json(data)
    return VarietySet.of(F, n, objs)
