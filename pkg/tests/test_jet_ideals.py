import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from valdist import jet_ideals as ji
from valdist import jets
from valdist.nevanlinna import coordinate_ring
from valdist.poly import MPoly, poly_ring

R = poly_ring("x", "y")
X, Y = R.gens()
seeds = st.integers(0, 2**32 - 1)


def _section(seed, degree=2):
    return jets.random_section(np.random.default_rng(seed), R, degree, density=0.7)


def test_jet_ideal_of_coordinate():
    J = ji.jet_ideal(ji.IdealModel([X]), 2)
    expected = {J.ring.x(0, l).normalized() for l in range(3)}
    assert J.normalized_set() == expected


@settings(max_examples=15, deadline=None)
@given(seeds, st.integers(1, 3))
def test_iterated_rule_matches_closure_and_is_monotone(seed, k):
    Z = ji.IdealModel([_section(seed), _section(seed + 1, 1)])
    a, b = ji.jet_ideal(Z, k), ji.jet_ideal_closed(Z, k)
    assert ji.same_generators(a, b)
    assert a.normalized_set() <= ji.jet_ideal(Z, k + 1).normalized_set()


@pytest.mark.parametrize("l", [1, 2, 3, 4])
def test_power_formula(l):
    assert ji.power_formula_check(X * Y + Y * Y * 3, l)


def test_intersection_identity():
    assert ji.intersection_jets_check([ji.IdealModel([X]), ji.IdealModel([Y * Y + X])], 2)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_division_reconstructs(seed):
    p = _section(seed, 3)
    divs = [_section(seed + 1, 1), _section(seed + 2, 2)]
    q, r = ji.divide(p, divs)
    assert sum((a * b for a, b in zip(q, divs)), MPoly(R)) + r == p


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_three_term_syzygy(seed):
    ring = jets.jet_ring(R.names, 1)
    a, b, c = (_section(seed + i) for i in range(3))
    assert ji.three_term_syzygy(a, b, c, ring)


def test_membership_certificate_p1():
    P1 = coordinate_ring(1)
    x0, x1 = P1.gens()
    assert ji.wronskian_sandwich_check([x1, x0], 1)
    ring = jets.jet_ring(P1.names, 1)
    assert ji.wronskian_membership_certificate(x1 * x0, x0 * x0, ji.IdealModel([x1]), ring)
    with pytest.raises(ValueError):
        ji.wronskian_membership_certificate(x0, x1, ji.IdealModel([x1]), ring)


def test_sandwich_with_monomial_ideal():
    P2 = coordinate_ring(2)
    g = P2.gens()
    quadrics = ji.monomial_basis(P2, 2)
    assert len(quadrics) == 6
    inside = [m for m in quadrics if P2.unpack(next(iter(m.terms)))[0] < 2]
    outside = [m for m in quadrics if m not in inside]
    assert ji.wronskian_sandwich_check(inside + outside, len(inside), ji.IdealModel([g[1], g[2]]))


def test_separation_sweep_counts():
    rep = ji.separation_sweep(2, 2, 2, 40, seed=3)
    assert rep.regular_passed == 40 and rep.singular_passed == 40
    assert rep.min_regular > 1e-9 and rep.max_singular <= 1e-12
    assert ji.separation_base_locus_check(2, 3, 2, 20, seed=4)
    with pytest.raises(ValueError):
        ji.separation_sweep(2, 1, 2, 5)


def test_normalized_minors_hadamard_bound():
    rng = np.random.default_rng(0)
    M = rng.normal(size=(3, 6)) + 1j * rng.normal(size=(3, 6))
    v = ji.normalized_wronskian_minors(M)
    assert len(v) == 20
    assert np.all(v <= 1 + 1e-12)


def test_ideal_model_validation():
    with pytest.raises(ValueError):
        ji.IdealModel([MPoly(R)])
    with pytest.raises(ValueError):
        ji.IdealModel([X, poly_ring("u").var(0)])
