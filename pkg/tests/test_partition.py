import itertools
import random

import pytest
from hypothesis import given, strategies as st

from conftest import all_points, prime_fields, random_lines
from ilab import (AffineObject, FieldSpec, GeneratorConfig, InputError, MultiPoly, VarietySet, cii_step, evaluate,
                  generate, good_partition_search, incidence_degree, min_vanishing_degree, partition_iterate,
                  rich_points)
from ilab.geom import _Draw, contains, lines_in_flats
from ilab.harness.suites import random_poly
from oracles import flat_points

F7, F11 = FieldSpec.prime(7), FieldSpec.prime(11)


def brute_incidences(p, s, t):
    sets = [flat_points(p, y.base, y.basis) for y in t]
    return sum(1 for x in s for ys in sets if x.base in ys)


def zero_on_points(f, o):
    """Z(f) contains o, decided pointwise (sound for deg f < p)."""
    p = f.field.p
    return all(evaluate(f, q) == 0 for q in flat_points(p, o.base, o.basis))


def two_planes():
    a = [AffineObject.line(F7, [0, i, 0], [1, i + 1, 0]) for i in range(3)]
    b = [AffineObject.line(F7, [0, i, 1], [1, 2 * i + 3, 0]) for i in range(3)]
    t = VarietySet.of(F7, 3, a + b)
    return rich_points(t, 2).points, t, a, b


def test_cii_equality_example():
    x, y = MultiPoly.var(F7, 2, 0), MultiPoly.var(F7, 2, 1)
    s = VarietySet.of(F7, 2, [AffineObject.point(F7, [0, 0]), AffineObject.point(F7, [1, 1])])
    t = VarietySet.of(F7, 2, [AffineObject.line(F7, [0, 0], [1, 0]), AffineObject.line(F7, [0, 0], [1, 1])])
    step = cii_step(s, t, y)
    assert (step.lhs, step.inside, step.outside, step.error_term) == (3, 1, 1, 1)
    assert step.rhs == 3 and step.slack == 0 and step.holds
    assert list(step.t_in) == [AffineObject.line(F7, [0, 0], [1, 0])]
    assert list(step.s_in) == [AffineObject.point(F7, [0, 0])]


def test_cii_constant_polynomial():
    s, t, _, _ = two_planes()
    step = cii_step(s, t, MultiPoly.constant(F7, 3, 3))
    assert len(step.t_in) == 0 and len(step.s_in) == 0 and step.error_term == 0
    assert step.lhs == step.outside == step.rhs


def test_cii_rejects_mismatched_polynomial():
    s, t, _, _ = two_planes()
    with pytest.raises(InputError):
        cii_step(s, t, MultiPoly.var(F7, 2, 0))


def test_good_partition_two_planes():
    _, t, a, b = two_planes()
    budget = min_vanishing_degree(t).degree
    assert budget == 2
    f = good_partition_search(t, 0.4, budget)
    inside = [y for y in t if zero_on_points(f, y)]
    assert len(inside) == 3 and set(inside) in (set(a), set(b))
    assert f.total_degree == 1


def test_good_partition_absent():
    one = VarietySet.of(F7, 3, [AffineObject.line(F7, [0, 0, 0], [1, 2, 3])])
    assert good_partition_search(one, 0.5, 3) is None
    t = generate(GeneratorConfig("generic_lines", FieldSpec.prime(101), 3, count=6, seed=7))
    assert good_partition_search(t, 0.9, 1) is None
    with pytest.raises(InputError):
        good_partition_search(t, 1.0, 1)
    with pytest.raises(InputError):
        good_partition_search(t, 0.5, 0)


def test_generic_lines_have_no_linear_good_partition():
    # exhaustive D = 1 oracle: a plane holds at most 2 of 6 generic lines, well below 0.9 * 6
    t = generate(GeneratorConfig("generic_lines", FieldSpec.prime(101), 3, count=6, seed=7))
    best = 0
    for a, b in itertools.combinations(t.members, 2):
        for w in _planes_through(a, b):
            best = max(best, sum(contains(w, y) for y in t))
    assert best <= 5


def _planes_through(a, b):
    F = a.field
    d = [F.sub(y, x) for x, y in zip(a.base, b.base)]
    for basis in ([a.basis[0], b.basis[0]], [a.basis[0], d]):
        try:
            yield AffineObject.flat(F, a.base, basis)
        except InputError:
            pass


def test_partition_two_planes():
    s, t, a, b = two_planes()
    tr = partition_iterate(s, t, 0.4)
    assert len(tr.pieces) == 2 and len(tr.steps) == 1
    assert {frozenset(p.t) for p in tr.pieces} == {frozenset(a), frozenset(b)}
    assert tr.total_error == 3
    assert tr.holds and tr.lhs == brute_incidences(7, s, t)


def test_partition_single_member():
    t = VarietySet.of(F7, 3, [AffineObject.line(F7, [0, 0, 0], [1, 2, 3])])
    s = VarietySet.of(F7, 3, [AffineObject.point(F7, [0, 0, 0])])
    tr = partition_iterate(s, t, 0.4)
    assert len(tr.pieces) == 1 and tr.steps == [] and tr.total_error == 0


def test_partition_four_planes():
    t, planes = lines_in_flats(_Draw(F11, 3, 50), 3, 2, 4, 5)
    s = rich_points(t, 2).points
    tr = partition_iterate(s, t, 0.2)
    assert len(tr.steps) >= 2
    for p in tr.pieces:
        assert any(all(contains(w, y) for y in p.t) for w in planes)
    assert tr.holds
    for st_ in tr.steps:
        assert st_.lhs <= st_.rhs


def test_partition_rejects_bad_budget():
    s, t, _, _ = two_planes()
    with pytest.raises(InputError):
        partition_iterate(s, t, 0.4, budget_rule="sometimes")
    with pytest.raises(InputError):
        partition_iterate(s, t, 0.4, budget_rule=0)


@given(st.data())
def test_cii_inequality_by_direct_count(data):
    F = data.draw(prime_fields((5, 7, 11)))
    n = data.draw(st.integers(2, 3))
    rng = random.Random(data.draw(st.integers(0, 2**32)))
    t = random_lines(rng, F, n, data.draw(st.integers(0, 8)))
    s = VarietySet.of(F, n, list(rich_points(t, 2).points) + rng.sample(all_points(F, n), 5))
    D = data.draw(st.integers(0, 4))
    f = random_poly(rng, F, n, D, density=data.draw(st.sampled_from([0.3, 1.0])))
    step = cii_step(s, t, f)
    assert step.lhs == brute_incidences(F.p, s, t)
    assert step.inside == brute_incidences(F.p, step.s_in, step.t_in)
    assert step.outside == brute_incidences(F.p, step.s_out, step.t_out)
    assert step.error_term == len(step.t_out) * max(f.total_degree, 0)
    assert step.lhs <= step.rhs
    assert set(step.s_in) | set(step.s_out) == set(s) and not set(step.s_in) & set(step.s_out)
    assert set(step.t_in) | set(step.t_out) == set(t) and not set(step.t_in) & set(step.t_out)
    if f.total_degree < F.p:
        assert all(zero_on_points(f, y) for y in step.t_in)
        assert not any(zero_on_points(f, y) for y in step.t_out)


@given(st.data())
def test_trace_invariants(data):
    F = data.draw(prime_fields((7, 11)))
    rng = random.Random(data.draw(st.integers(0, 2**32)))
    planes, per = data.draw(st.integers(1, 3)), data.draw(st.integers(1, 4))
    t, _ = lines_in_flats(_Draw(F, rng.randrange(2**32), 50), 3, 2, planes, per)
    extra = random_lines(rng, F, 3, data.draw(st.integers(0, 3)))
    t = VarietySet.of(F, 3, list(t) + list(extra))
    s = rich_points(t, 2).points
    tau = data.draw(st.sampled_from([0.2, 0.4, 0.6]))
    budget = data.draw(st.sampled_from(["relative", 1, 2]))
    tr = partition_iterate(s, t, tau, budget_rule=budget, seed=3)
    all_s = [x for p in tr.pieces for x in p.s]
    all_t = [y for p in tr.pieces for y in p.t]
    assert sorted(all_s, key=AffineObject.key) == sorted(s, key=AffineObject.key)
    assert sorted(all_t, key=AffineObject.key) == sorted(t, key=AffineObject.key)
    assert sum(p.t.total_degree for p in tr.pieces) == t.total_degree
    assert tr.total_error == sum(len(st_.t_out) * max(st_.f.total_degree, 0) for st_ in tr.steps)
    assert tr.pieces_incidence + tr.total_error >= brute_incidences(F.p, s, t)
    by_id = {p.id: p for p in tr.all_pieces}
    for st_ in tr.steps:
        assert st_.lhs <= st_.rhs
        piece_t = by_id[st_.piece].t
        cap = min_vanishing_degree(piece_t).degree if budget == "relative" else budget
        assert st_.f.total_degree <= cap
        inside = len(st_.t_in)
        assert tau * len(piece_t) < inside < len(piece_t)
    again = partition_iterate(s, t, tau, budget_rule=budget, seed=3)
    assert [st_.f for st_ in again.steps] == [st_.f for st_ in tr.steps]
    assert [frozenset(p.t) for p in again.pieces] == [frozenset(p.t) for p in tr.pieces]
