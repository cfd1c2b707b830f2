import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import prime_fields, random_lines
from ilab import (AffineObject, FieldSpec, GeneratorConfig, InputError, VarietySet, brute_force_reference,
                  concentration, concentration_profile, generate, restrict_to)
from ilab.concentrate import _all_flats_as_point_sets
from ilab.errors import SizeLimitError
from ilab.geom import _count_flats, _Draw, lines_in_flats
from oracles import brute_max_in_plane

F5, F7, F11 = (FieldSpec.prime(p) for p in (5, 7, 11))
Q = FieldSpec.rational()


def plane_z(F, c=0):
    return AffineObject.flat(F, [0, 0, c], [[1, 0, 0], [0, 1, 0]])


def coplanar(F, count, c=0):
    return [AffineObject.line(F, [0, i, c], [1, i, 0]) for i in range(count)]


def two_planes(F):
    a = [AffineObject.line(F, [0, i, 0], [1, 2 * i + 1, 0]) for i in range(3)]
    b = [AffineObject.line(F, [0, 0, i + 1], [1, 0, 3 * i + 1]) for i in range(2)]
    return VarietySet.of(F, 3, a + b)


def gaussian_binomial(n, m, q):
    num = den = 1
    for i in range(m):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def test_concentration_examples():
    t = VarietySet.of(F7, 3, coplanar(F7, 5))
    est = concentration(t, 2)
    assert est.value == 5 and est.witness == (plane_z(F7),)
    assert concentration(t, 3).value == 5
    est = concentration(two_planes(F7), 2)
    assert est.value == 3
    assert est.witness == (plane_z(F7),)


def test_profile_examples():
    t, _ = lines_in_flats(_Draw(F7, 9, 50), 3, 2, 2, 3)
    assert [e.value for e in concentration_profile(t)] == [3, 6]
    one = VarietySet.of(F7, 3, [AffineObject.line(F7, [0, 0, 0], [1, 2, 3])])
    assert [e.value for e in concentration_profile(one)] == [1, 1]
    assert [e.m for e in concentration_profile(one, m_min=1)] == [1, 2, 3]


def test_generic_lines_profile_is_recorded():
    t = generate(GeneratorConfig("generic_lines", FieldSpec.prime(101), 3, count=20, seed=1))
    prof = concentration_profile(t)
    assert prof[-1].value == 20
    assert prof[0].value <= 3


def test_brute_force_examples():
    t = VarietySet.of(F5, 3, coplanar(F5, 5))
    assert brute_force_reference(t, 2).value == 5 == concentration(t, 2).value
    assert brute_force_reference(VarietySet.of(F5, 3), 2).value == 0
    skew = VarietySet.of(F5, 3, [AffineObject.line(F5, [0, 0, 0], [1, 0, 0]), AffineObject.line(F5, [0, 0, 1], [0, 1, 0])])
    assert brute_force_reference(skew, 2).value == 1
    assert concentration(skew, 2).value == 1


def test_empty_and_bad_dimensions():
    empty = VarietySet.of(F7, 3)
    assert concentration(empty, 2).value == 0
    assert concentration(empty, 3).value == 0
    t = VarietySet.of(F7, 3, coplanar(F7, 2))
    with pytest.raises(InputError):
        concentration(t, 0)
    with pytest.raises(InputError):
        concentration(t, 4)
    with pytest.raises(InputError):
        concentration(t, 2, oracle="psychic")


def test_exhaustive_ceiling_and_field():
    t = VarietySet.of(F7, 3, coplanar(F7, 2))
    with pytest.raises(SizeLimitError, match="ceiling 10"):
        concentration(t, 2, "exhaustive", ceiling=10)
    with pytest.raises(InputError):
        concentration(VarietySet.of(Q, 3, coplanar(Q, 2)), 2, "exhaustive")
    with pytest.raises(SizeLimitError):
        brute_force_reference(VarietySet.of(F11, 3, coplanar(F11, 2)), 2)


def test_union_greedy_two_planes():
    est = concentration(two_planes(F7), 2, "union_greedy")
    # one plane alone gives 3, both give 5/2
    assert est.value == 3 and len(est.witness) == 1
    t = VarietySet.of(F7, 3, coplanar(F7, 3) + coplanar(F7, 3, c=1))
    est = concentration(t, 2, "union_greedy")
    assert est.value == 3 and est.witness_degree in (1, 2)


@pytest.mark.parametrize("p,n", [(2, 3), (3, 3), (5, 2), (3, 2)])
def test_flat_counts_match_enumeration(p, n):
    for m in range(n + 1):
        expect = p ** (n - m) * gaussian_binomial(n, m, p)
        assert _count_flats(p, n, m) == expect
        assert len(_all_flats_as_point_sets(p, n, m)) == expect


def random_planes_instance(rng, F, planes, per):
    return lines_in_flats(_Draw(F, rng.randrange(2**32), 50), 3, 2, planes, per)[0]


@given(st.data())
def test_spanned_le_exhaustive_eq_brute(data):
    F = data.draw(prime_fields((3, 5)))
    rng = random.Random(data.draw(st.integers(0, 2**32)))
    t = random_lines(rng, F, 3, data.draw(st.integers(0, 6)))
    m = data.draw(st.integers(1, 3))
    sp = concentration(t, m, "spanned").value
    ex = concentration(t, m, "exhaustive").value
    bf = brute_force_reference(t, m).value
    assert sp <= ex == bf
    # a maximizing flat always contains a member unless T is empty, so its span realizes the max
    assert sp == ex
    if m == 2:
        assert ex == brute_max_in_plane(F.p, list(t))


@given(st.data())
def test_spanned_matches_exhaustive_on_generator_families(data):
    F = data.draw(prime_fields((5, 7)))
    rng = random.Random(data.draw(st.integers(0, 2**32)))
    t = random_planes_instance(rng, F, data.draw(st.integers(1, 3)), data.draw(st.integers(1, 4)))
    assert concentration(t, 2).value == concentration(t, 2, "exhaustive").value


@given(st.data())
def test_witness_consistency(data):
    F = data.draw(prime_fields((5, 7, 11)))
    rng = random.Random(data.draw(st.integers(0, 2**32)))
    n = data.draw(st.integers(2, 4))
    t = random_lines(rng, F, n, data.draw(st.integers(0, 7)))
    m = data.draw(st.integers(1, n))
    for oracle in ("spanned", "union_greedy"):
        est = concentration(t, m, oracle)
        assert all(w.dim == m for w in est.witness)
        inside = {x for w in est.witness for x in restrict_to(t, w)}
        assert est.value * est.witness_degree == sum(x.degree for x in inside)
        if oracle == "union_greedy":
            assert est.value >= concentration(t, m).value


@given(st.data())
def test_subset_monotone_and_top_dimension(data):
    F = data.draw(prime_fields((3, 5, 7)))
    rng = random.Random(data.draw(st.integers(0, 2**32)))
    n = data.draw(st.integers(2, 3))
    t = random_lines(rng, F, n, data.draw(st.integers(0, 7)))
    sub = t.subset(rng.sample(list(t.members), rng.randint(0, len(t))))
    for m in range(1, n + 1):
        assert concentration(sub, m).value <= concentration(t, m).value
    assert concentration(t, n).value == Fraction(t.total_degree)
    prof = concentration_profile(t)
    assert all(a.value <= b.value for a, b in zip(prof, prof[1:]))


def test_points_profile_starts_at_lines():
    pts = VarietySet.of(F7, 2, [AffineObject.point(F7, [i, 0]) for i in range(4)] + [AffineObject.point(F7, [1, 1])])
    prof = concentration_profile(pts)
    assert [(e.m, e.value) for e in prof] == [(1, 4), (2, 5)]
