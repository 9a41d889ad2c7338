import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from valdist.crofton import (
    BLOCK,
    HaarSampler,
    average_proximity,
    average_subsystem_base_locus,
    average_weil_hyperplane,
    harmonic,
)
from valdist.curves import ProjectiveCurve
from valdist.poly import CPoly


def test_unitary_and_partition_invariant():
    s = HaarSampler(3, seed=5)
    U = s.unitaries(0, BLOCK + 10)
    assert np.allclose(U[7] @ U[7].conj().T, np.eye(3), atol=1e-12)
    parts = np.concatenate([s.unitaries(0, 100), s.unitaries(100, BLOCK - 90)])
    assert np.array_equal(parts, U)
    assert np.array_equal(s.unitary(BLOCK + 3), U[BLOCK + 3])


def test_first_entry_follows_beta_law():
    """|U_00|^2 ~ Beta(1, n) for Haar U in U(n+1)."""
    n = 3
    U = HaarSampler(n + 1, seed=11).unitaries(0, 8000)
    res = stats.kstest(np.abs(U[:, 0, 0]) ** 2, stats.beta(1, n).cdf)
    assert res.pvalue > 1e-3


def test_left_invariance_of_law():
    """V U has the same law as U: compare |(VU)_00|^2 with Beta(1, n)."""
    n = 2
    rng = np.random.default_rng(0)
    V = stats.unitary_group.rvs(n + 1, random_state=rng)
    U = HaarSampler(n + 1, seed=3).unitaries(0, 8000)
    VU = V @ U
    assert stats.kstest(np.abs(VU[:, 0, 0]) ** 2, stats.beta(1, n).cdf).pvalue > 1e-3
    assert stats.kstest(np.abs(VU[:, 1, 2]) ** 2, stats.beta(1, n).cdf).pvalue > 1e-3


@pytest.mark.parametrize("n", [1, 2, 3])
def test_weil_average_is_half_harmonic(n):
    x = np.arange(1, n + 2) * (1 + 0.5j)
    m, se = average_weil_hyperplane(n, x, 20_000, HaarSampler(n + 1, seed=9))
    assert abs(m - harmonic(n) / 2) <= 4 * se


def test_stderr_scales_like_inverse_sqrt():
    x = np.array([1, 1j, 2])
    _, s1 = average_weil_hyperplane(2, x, 1_000, HaarSampler(3, seed=42))
    _, s2 = average_weil_hyperplane(2, x, 100_000, HaarSampler(3, seed=42))
    assert 8 <= s1 / s2 <= 12


@settings(max_examples=5, deadline=None)
@given(st.integers(0, 2**32), st.sampled_from([1, 3, 8]))
def test_thread_count_does_not_change_results(seed, threads):
    x = np.array([1, 2j, -1])
    a = average_weil_hyperplane(2, x, 10_000, HaarSampler(3, seed, 1))
    b = average_weil_hyperplane(2, x, 10_000, HaarSampler(3, seed, threads))
    assert a == b


def test_subsystem_against_scipy_haar():
    """Dual route: same expectation from an independent Haar generator."""
    n, k = 2, 1
    x = np.array([1, 1j, -2]) / np.sqrt(6)
    m, se = average_subsystem_base_locus(n, k, x, 20_000, HaarSampler(n + 1, seed=4))
    U = stats.unitary_group.rvs(n + 1, size=20_000, random_state=np.random.default_rng(4))
    v = -np.log(np.max(np.abs(U[:, : k + 1, :] @ x), axis=1))
    assert abs(m - v.mean()) <= 4 * np.hypot(se, v.std() / np.sqrt(len(v)))


def test_average_proximity_constant_and_r_independent():
    f = ProjectiveCurve([CPoly([1]), CPoly([1, 1]), CPoly([0, 0, 1])])
    h = harmonic(2) / 2
    vals = [average_proximity(f, r, 20_000, HaarSampler(3, seed=1, stream=s)) for s, r in enumerate((3.0, 30.0))]
    for m, se in vals:
        assert abs(m - h) <= 4 * se
    (m1, s1), (m2, s2) = vals
    assert abs(m1 - m2) <= 4 * np.hypot(s1, s2)


def test_validation():
    with pytest.raises(ValueError):
        HaarSampler(0)
    with pytest.raises(ValueError):
        average_weil_hyperplane(2, [1, 0], 10, HaarSampler(3))
    with pytest.raises(ValueError):
        average_weil_hyperplane(1, [0, 0], 10, HaarSampler(2))
