from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from valdist.corpus import corpus_rng, normal_form_curve, random_rational_curve
from valdist.curves import (
    DegenerateCurveError,
    LinearTarget,
    ProjectiveCurve,
    contact_function,
    derived_orders,
    plucker_density,
    reduce_representation,
    stationary_points,
    vanishing_orders,
)
from valdist.exterior import subsets
from valdist.poly import CPoly

LINE = ProjectiveCurve([CPoly([1]), CPoly([0, 1])])
CONIC = ProjectiveCurve([CPoly([1]), CPoly([0, 1]), CPoly([0, 0, 1])])


def test_fubini_study_density_of_line():
    """h_0 for [1:z] is (1+|z|^2)^-2."""
    z = np.array([0, 0.5 + 1j, -3j, 10])
    assert np.allclose(plucker_density(LINE, 0, z), (1 + abs(z) ** 2) ** -2)
    assert plucker_density(LINE, 1, 0.3) == 0.0  # F^2 = 0


def test_conic_derived_norms_closed_form():
    # F^1 = (1, 2z, z^2) up to order of the subsets; F^2 = 2
    z = 0.7 - 0.2j
    assert CONIC.derived_norm2(z, 1) == pytest.approx(1 + 4 * abs(z) ** 2 + abs(z) ** 4)
    assert CONIC.derived_norm2(z, 2) == pytest.approx(4.0)
    assert CONIC.wronskian == CPoly([2])


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**31))
def test_derived_polys_match_numeric_minors(seed):
    rng = corpus_rng(seed, 1)
    f = random_rational_curve(rng, 2, 3)
    z = complex(rng.normal(), rng.normal())
    M = np.array([[complex(p(z)) for p in row] for row in f.derivatives(1)])
    polys = f.derived_polys(1)
    for I in subsets(3, 2):
        assert np.isclose(complex(polys[I](z)), np.linalg.det(M[:, list(I)]))
    assert np.allclose(f.derived_array(z, 1), [complex(polys[I](z)) for I in subsets(3, 2)])


def test_reduce_representation_divides_gcd():
    g = CPoly.from_roots([Fraction(1, 2)])
    f = reduce_representation([g * CPoly([1, 1]), g * CPoly([0, 1]), g])
    assert f.components == (CPoly([1, 1]), CPoly([0, 1]), CPoly([1]))


def test_degenerate_curve():
    f = ProjectiveCurve([CPoly([1]), CPoly([0, 1]), CPoly([1, 1])])
    assert f.is_degenerate()
    with pytest.raises(DegenerateCurveError):
        vanishing_orders(f)
    with pytest.raises(ValueError):
        ProjectiveCurve([CPoly([1])])


def test_contact_function_hyperplane_closed_form():
    """phi_0 for H = {x_0 = 0} on [1:z] is 1/(1+|z|^2)."""
    H = LinearTarget.hyperplane([1, 0])
    z = np.array([0.1, 2j, -5])
    assert np.allclose(contact_function(LINE, H, 0, z), 1 / (1 + abs(z) ** 2))
    # phi_n(H) = 1 for any H
    assert np.allclose(contact_function(LINE, H, 1, z), 1.0)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**31))
def test_contact_function_is_a_ratio_in_unit_interval(seed):
    rng = corpus_rng(seed, 2)
    f = random_rational_curve(rng, 3, 3)
    H = LinearTarget.hyperplane(rng.normal(size=4) + 1j * rng.normal(size=4))
    z = rng.normal(size=20) + 1j * rng.normal(size=20)
    for k in range(4):
        phi = contact_function(f, H, k, z)
        assert np.all(phi >= 0) and np.all(phi <= 1 + 1e-12)
    # a hyperplane through f(z0) gives phi_0(z0) = 0
    z0 = 0.3 + 0.4j
    v = f(z0)
    a = np.array([v[1], -v[0], 0, 0])  # the pairing is bilinear
    assert contact_function(f, LinearTarget.hyperplane(a), 0, z0) == pytest.approx(0, abs=1e-14)


def test_stationary_points_and_orders():
    # [1 : z^2 : z^3] has nu = (1, 0) at 0
    f = ProjectiveCurve([CPoly([1]), CPoly([0, 0, 1]), CPoly([0, 0, 0, 1])])
    assert vanishing_orders(f, 0) == (1, 0)
    assert derived_orders(f, 0) == (1, 2)
    assert np.allclose(stationary_points(f, 1), [0])
    assert stationary_points(CONIC, 1) == []


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(0, 2), min_size=1, max_size=3), st.integers(0, 2**31))
def test_normal_form_orders(nu, seed):
    rng = corpus_rng(seed, 3)
    c = normal_form_curve(rng, nu, point=Fraction(1, 2))
    assert vanishing_orders(c.curve, c.point) == tuple(nu)
    assert derived_orders(c.curve, c.point) == c.expected_orders


def test_plucker_density_finite_difference_line():
    z = 0.4 + 0.3j
    h = 1e-3
    g = lambda w: np.log(LINE.derived_norm2(w, 0))  # noqa: E731
    lap = (g(z + h) + g(z - h) + g(z + 1j * h) + g(z - 1j * h) - 4 * g(z)) / h**2
    assert lap / 4 == pytest.approx(plucker_density(LINE, 0, z), rel=1e-5)
