import itertools
import json

import pytest
from hypothesis import given, strategies as st

from conftest import lines, points, prime_fields, vectors
from ilab import AffineObject, FieldSpec, GeneratorConfig, InputError, VarietySet, contains, generate, restrict_to
from ilab.geom import (_Draw, extend_to_dim, grid_instance, intersect_lines, lines_in_flats, set_from_json,
                       set_to_json, span_of)
from ilab.exactfield import rank_rows

F5, F7, F11 = FieldSpec.prime(5), FieldSpec.prime(7), FieldSpec.prime(11)
Q = FieldSpec.rational()


def point_set(o):
    """All F_p points of a flat, by brute force over parameters."""
    F = o.field
    return {o.point_at(c) for c in itertools.product(range(F.p), repeat=o.dim)}


def test_containment_examples():
    x_axis = AffineObject.line(F7, [0, 0], [1, 0])
    assert contains(x_axis, AffineObject.point(F7, [0, 0]))
    assert not contains(x_axis, AffineObject.point(F7, [1, 1]))
    z0 = AffineObject.flat(F7, [0, 0, 0], [[1, 0, 0], [0, 1, 0]])
    assert contains(z0, AffineObject.line(F7, [0, 0, 0], [1, 0, 0]))
    with pytest.raises(InputError):
        contains(x_axis, AffineObject.point(F5, [0, 0]))


def test_intersection_examples():
    p = intersect_lines(AffineObject.line(F7, [0, 0], [1, 0]), AffineObject.line(F7, [0, 0], [0, 1]))
    assert p == AffineObject.point(F7, [0, 0])
    assert intersect_lines(AffineObject.line(F7, [0, 0, 0], [1, 0, 0]),
                           AffineObject.line(F7, [0, 1, 0], [1, 0, 0])) is None
    assert intersect_lines(AffineObject.line(F7, [0, 0, 0], [1, 0, 0]),
                           AffineObject.line(F7, [0, 0, 1], [0, 1, 0])) is None


def test_restrict_examples():
    inside = [AffineObject.line(F7, [0, i, 0], [1, i, 0]) for i in range(5)]
    outside = [AffineObject.line(F7, [0, 0, 1], [1, 0, 0]), AffineObject.line(F7, [0, 0, 0], [0, 0, 1])]
    ts = VarietySet.of(F7, 3, inside + outside)
    z0 = AffineObject.flat(F7, [0, 0, 0], [[1, 0, 0], [0, 1, 0]])
    r = restrict_to(ts, z0)
    assert set(r) == set(inside) and r.total_degree == 5
    assert restrict_to(ts, AffineObject.whole_space(F7, 3)) == ts
    assert restrict_to(VarietySet.of(F7, 3), z0).total_degree == 0


def test_span_examples():
    a = AffineObject.line(F7, [0, 0, 0], [1, 0, 0])
    b = AffineObject.line(F7, [0, 0, 0], [0, 1, 0])
    assert span_of([a, b]) == AffineObject.flat(F7, [0, 0, 0], [[1, 0, 0], [0, 1, 0]])
    pt = AffineObject.point(F7, [1, 2, 3])
    assert span_of([pt]) == pt and span_of([pt]).dim == 0
    skew = AffineObject.line(F7, [0, 0, 1], [0, 1, 0])
    assert span_of([a, skew]) == AffineObject.whole_space(F7, 3)


def test_generator_examples():
    assert len(generate(GeneratorConfig("grid", F5, 2, grid_side=3))) == 9
    bundle = generate(GeneratorConfig("concurrent_bundle", F7, 2, count=3, seed=4))
    assert len(bundle) == 3
    hits = {intersect_lines(a, b) for a, b in itertools.combinations(bundle, 2)}
    assert len(hits) == 1
    t, planes = lines_in_flats(_Draw(F7, 9, 50), 3, 2, 2, 3)
    assert len(t) == 6
    for w in planes:
        assert restrict_to(t, w).total_degree == 3


def test_direction_cover_has_every_direction():
    t = generate(GeneratorConfig("direction_cover", F5, 2, seed=1))
    assert len(t) == 6
    assert len({l.basis for l in t}) == 6


def test_generator_rejects_impossible_requests():
    with pytest.raises(InputError):
        generate(GeneratorConfig("generic_lines", FieldSpec.prime(2), 2, count=7))
    with pytest.raises(InputError):
        generate(GeneratorConfig("lines_in_flats", F5, 3, m=3, flats=1, lines_per_flat=2))
    with pytest.raises(InputError):
        generate(GeneratorConfig("bogus", F5, 3))


def test_dependent_basis_rejected():
    with pytest.raises(InputError):
        AffineObject.flat(F7, [0, 0, 0], [[1, 1, 0], [2, 2, 0]])


def test_json_round_trip_and_format():
    doc = {"field": {"kind": "prime", "p": 7}, "ambient_dim": 3, "objects": [
        {"kind": "point", "coords": ["1", "2", "0"]},
        {"kind": "point", "coords": ["8", "2", "0"]},
    ]}
    vs = set_from_json(doc)
    assert len(vs) == 1
    lines_doc = {"field": {"kind": "prime", "p": 7}, "ambient_dim": 3, "objects": [
        {"kind": "line", "base": ["0", "0", "0"], "dir": ["1", "0", "0"]},
        {"kind": "line", "base": ["3", "0", "0"], "dir": ["2", "0", "0"]},
        {"kind": "line", "base": ["0", "1", "0"], "dir": ["0", "0", "1"]},
    ]}
    ls = set_from_json(lines_doc)
    assert len(ls) == 2
    out = set_to_json(ls)
    assert set_from_json(json.loads(json.dumps(out))) == ls.sorted()
    assert out["objects"][0] == {"kind": "line", "base": ["0", "0", "0"], "dir": ["1", "0", "0"]}
    flat = set_from_json({"field": {"kind": "rational"}, "ambient_dim": 3, "objects": [
        {"kind": "flat", "dim": 2, "base": ["0", "0", "1/2"], "basis": [["2", "0", "0"], ["0", "3", "0"]]}]})
    assert set_to_json(flat)["objects"][0]["base"] == ["0", "0", "1/2"]
    with pytest.raises(InputError):
        set_from_json({"field": {"kind": "prime", "p": 7}, "ambient_dim": 3,
                       "objects": [{"kind": "flat", "dim": 1, "base": ["0"] * 3, "basis": [["1", "0", "0"], ["0", "1", "0"]]}]})


@st.composite
def flats(draw, F=None, n=None):
    F = F or draw(prime_fields((3, 5, 7)))
    n = n or draw(st.integers(1, 4))
    m = draw(st.integers(0, n))
    basis = []
    while len(basis) < m:
        v = draw(vectors(F, n, nonzero=True))
        if rank_rows(F, basis + [v], n) == len(basis) + 1:
            basis.append(v)
    return AffineObject.flat(F, draw(vectors(F, n)), basis)


@given(flats(), st.data())
def test_canonical_form_ignores_parametrization(w, data):
    F, n = w.field, w.ambient_dim
    # random invertible change of basis plus a shifted base point
    m = w.dim
    while True:
        M = [data.draw(vectors(F, m)) for _ in range(m)]
        if rank_rows(F, M, m) == m:
            break
    new_basis = [[sum(F.mul(F(M[i][k]), w.basis[k][j]) for k in range(m)) % F.p for j in range(n)] for i in range(m)]
    shift = data.draw(vectors(F, m))
    w2 = AffineObject.flat(F, w.point_at(shift), new_basis)
    assert w2 == w and w2.key() == w.key()
    assert AffineObject.flat(F, w.base, w.basis) == w


@given(flats(F=F5, n=3))
def test_canonical_equality_matches_point_sets(w):
    other = AffineObject.flat(F5, [1, 0, 0], w.basis) if w.dim < 3 else w
    assert (other == w) == (point_set(other) == point_set(w))


@given(st.data())
def test_containment_transitive_on_chains(data):
    F = data.draw(prime_fields((3, 5, 7)))
    n = data.draw(st.integers(2, 4))
    w = data.draw(flats(F, n))
    if w.dim == 0:
        return
    # a line inside w and a point on that line
    c = data.draw(vectors(F, w.dim, nonzero=True))
    d = [sum(F.mul(F(ci), v[j]) for ci, v in zip(c, w.basis)) % F.p for j in range(n)]
    line = AffineObject.line(F, w.point_at(data.draw(vectors(F, w.dim))), d)
    pt = AffineObject.point(F, line.point_at([data.draw(st.integers(0, F.p - 1))]))
    assert contains(w, line) and contains(line, pt) and contains(w, pt)


@given(st.data())
def test_contains_agrees_with_point_sets(data):
    F = data.draw(prime_fields((2, 3, 5)))
    n = data.draw(st.integers(1, 3))
    a, b = data.draw(flats(F, n)), data.draw(flats(F, n))
    assert contains(a, b) == (point_set(b) <= point_set(a))


@given(st.data())
def test_intersection_symmetric_and_incident(data):
    F = data.draw(prime_fields((3, 5, 7, 11)))
    n = data.draw(st.integers(2, 4))
    a, b = data.draw(lines(F, n)), data.draw(lines(F, n))
    if a == b:
        return
    p, q = intersect_lines(a, b), intersect_lines(b, a)
    assert p == q
    if p is not None:
        assert contains(a, p) and contains(b, p)
    common = point_set(a) & point_set(b)
    assert (p is None) == (not common)
    if p is not None:
        assert common == {p.base}


@given(st.data())
def test_span_contains_inputs_and_is_minimal(data):
    F = data.draw(prime_fields((3, 5, 7)))
    n = data.draw(st.integers(1, 4))
    objs = data.draw(st.lists(st.one_of(points(F, n), lines(F, n)), min_size=1, max_size=4))
    w = span_of(objs)
    assert all(contains(w, o) for o in objs)
    # every extra dimension is forced: dropping a direction loses some input
    for i in range(w.dim):
        smaller = AffineObject.flat(F, w.base, w.basis[:i] + w.basis[i + 1:])
        assert not all(contains(smaller, o) for o in objs)


@given(flats(F=F7, n=4), st.integers(0, 4))
def test_extend_to_dim(w, m):
    e = extend_to_dim(w, m)
    assert e.dim == max(w.dim, m)
    assert contains(e, w)


@given(st.sampled_from(["generic_lines", "concurrent_bundle", "lines_in_flats", "grid"]),
       st.integers(0, 2**64 - 1), st.sampled_from([F7, F11, Q]))
def test_generate_is_deterministic(family, seed, F):
    kw = dict(count=6, flats=2, lines_per_flat=3, grid_side=3, seed=seed)
    a = generate(GeneratorConfig(family, F, 3, **kw))
    b = generate(GeneratorConfig(family, F, 3, **kw))
    assert a == b
    assert json.dumps(set_to_json(a)) == json.dumps(set_to_json(b))


def test_grid_instance_shape():
    pts, ls = grid_instance(Q, 3)
    assert len(pts) == 9 and len(ls) == 6
    assert all(sum(contains(l, p) for l in ls) == 2 for p in pts)


def test_variety_set_rejects_mixed_dims():
    with pytest.raises(InputError):
        VarietySet.of(F7, 2, [AffineObject.point(F7, [0, 0]), AffineObject.line(F7, [0, 0], [1, 0])])
