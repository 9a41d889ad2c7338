import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from valdist.exterior import (
    ExteriorCovector,
    ExteriorVector,
    contraction_matrix,
    interior_product,
    merge_sign,
    subsets,
    wedge_vectors,
)


def _rand(rng, shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def _random_element(rng, cls, ambient, level):
    return cls(ambient, level, {I: complex(c) for I, c in zip(subsets(ambient, level),
                                                             _rand(rng, len(subsets(ambient, level))))})


@settings(max_examples=30)
@given(st.integers(2, 5), st.integers(0, 2**32 - 1))
def test_wedge_coordinates_are_minors(N, seed):
    rng = np.random.default_rng(seed)
    m = int(rng.integers(1, N + 1))
    V = _rand(rng, (m, N))
    w = wedge_vectors(list(V))
    for I in subsets(N, m):
        assert np.isclose(w.get(I), np.linalg.det(V[:, list(I)]), atol=1e-10)


def test_wedge_alternates():
    rng = np.random.default_rng(1)
    a, b, c = _rand(rng, (3, 4))
    assert np.allclose(wedge_vectors([a, b, c]).as_array(), -wedge_vectors([b, a, c]).as_array())
    assert np.allclose(wedge_vectors([a, a, c]).as_array(), 0)


def test_merge_sign():
    assert merge_sign((0, 2), (1,)) == -1
    assert merge_sign((0,), (1, 2)) == 1
    assert merge_sign((1,), (1,)) == 0


@settings(max_examples=25)
@given(st.integers(3, 5), st.integers(0, 2**32 - 1))
def test_interior_product_defining_identity(N, seed):
    """gamma(alpha _| beta) == (beta ^ gamma)(alpha) for all gamma."""
    rng = np.random.default_rng(seed)
    p = int(rng.integers(1, N + 1))
    q = int(rng.integers(1, p + 1))
    alpha = _random_element(rng, ExteriorVector, N, p)
    beta = _random_element(rng, ExteriorCovector, N, q)
    cont = interior_product(alpha, beta)
    if p == q:
        assert np.isclose(cont, sum(c * alpha.get(k) for k, c in beta.coeffs.items()))
        return
    for K in subsets(N, p - q):
        gamma = ExteriorCovector.basis(N, K)
        bg = beta.wedge(gamma)
        lhs = ExteriorCovector(N, p - q, gamma.coeffs)(cont)
        rhs = ExteriorCovector(N, p, bg.coeffs)(alpha)
        assert np.isclose(lhs, rhs, atol=1e-10)


def test_contraction_matrix_matches_interior_product():
    rng = np.random.default_rng(7)
    alpha = _random_element(rng, ExteriorVector, 5, 3)
    beta = _random_element(rng, ExteriorCovector, 5, 2)
    C = contraction_matrix(beta, 3)
    assert np.allclose(C @ alpha.as_array(), interior_product(alpha, beta).as_array())


def test_hyperplane_contraction_of_decomposable():
    """(v_0 ^ v_1) _| a = a(v_0) v_1 - a(v_1) v_0."""
    rng = np.random.default_rng(2)
    v0, v1, a = _rand(rng, (3, 4))
    got = interior_product(wedge_vectors([v0, v1]), ExteriorCovector.from_vector(a)).as_array()
    assert np.allclose(got, (a @ v0) * v1 - (a @ v1) * v0)


def test_level_errors():
    with pytest.raises(ValueError):
        ExteriorVector(3, 4)
    with pytest.raises(ValueError):
        ExteriorVector(3, 2, {(1, 0): 1.0})
    with pytest.raises(ValueError):
        interior_product(ExteriorVector.basis(3, (0,)), ExteriorCovector.basis(3, (0, 1)))
