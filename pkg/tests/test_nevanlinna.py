import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from valdist.curves import LinearTarget, ProjectiveCurve
from valdist.nevanlinna import (
    SubschemeOnPn,
    SupportError,
    aald_check,
    ahlfors_lld_check,
    cartan_profile,
    characteristic,
    counting,
    exceptional_measure,
    fit_budget,
    fmt_residual,
    general_position,
    green_jensen_check,
    n_ddc_log_h0,
    nphi,
    points_smt_profile,
    proximity,
    weil_value,
)
from valdist.poly import CPoly

LINE = ProjectiveCurve([CPoly([1]), CPoly([0, 1])])
CONIC = ProjectiveCurve([CPoly([1]), CPoly([0, 1]), CPoly([0, 0, 1])])
R_GRID = np.geomspace(2, 200, 8)


def test_line_closed_forms():
    for r in (0.5, 3.0, 40.0):
        T = 0.5 * np.log(1 + r * r)
        assert characteristic(LINE, 1, r) == pytest.approx(T, abs=1e-12)
        assert characteristic(LINE, 2, r) == pytest.approx(2 * T, abs=1e-12)
        assert proximity(LINE, SubschemeOnPn.hyperplane([1, 0]), r)[0] == pytest.approx(T, abs=1e-10)
        z0 = SubschemeOnPn.hyperplane([0, 1])
        assert counting(LINE, z0, r) == pytest.approx(np.log(r))
        assert proximity(LINE, z0, r)[0] == pytest.approx(T - np.log(r), abs=1e-10)


def test_conic_characteristic_and_fmt():
    r = np.geomspace(2, 200, 40)
    T = np.array([characteristic(CONIC, 1, x) for x in r])
    assert np.allclose(T, 0.5 * np.log(1 + r**2 + r**4), atol=1e-12)
    prof, budget = fmt_residual(CONIC, SubschemeOnPn.hyperplane([0, 0, 1]), r)
    assert budget.spread <= 0.02
    assert np.allclose(prof.residual, 0, atol=1e-9)


def test_weil_function_of_point_on_p1():
    """lambda_P(x) = -log |x ^ p| / (|x| |p|)."""
    p = np.array([1, 2j])
    x = np.array([0.3 - 1j, 2])
    sin = abs(x[0] * p[1] - x[1] * p[0]) / (np.linalg.norm(x) * np.linalg.norm(p))
    assert weil_value(SubschemeOnPn.point(p), x) == pytest.approx(-np.log(sin))
    assert weil_value(SubschemeOnPn.point(p), 3 * p) == np.inf


def test_weil_function_is_projectively_invariant():
    Z = SubschemeOnPn.hyperplane([1, 1j, -2])
    x = np.array([0.5, 1 + 1j, -1])
    assert weil_value(Z, x) == pytest.approx(weil_value(Z, (2 - 3j) * x))


def test_support_error():
    with pytest.raises(SupportError):
        proximity(ProjectiveCurve([CPoly([0]), CPoly([1]), CPoly([0, 1])]), SubschemeOnPn.hyperplane([1, 0, 0]), 2.0)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.floats(-5, 5), st.floats(-5, 5)), min_size=1, max_size=6), st.integers(0, 3))
def test_green_jensen(roots, m0):
    pts = [complex(a, b) for a, b in roots]
    if any(abs(a) < 1e-3 for a in pts):
        return
    p = CPoly.from_roots(pts + [0] * m0, 1.5 - 0.5j)
    r = 2 * max(abs(a) for a in pts) + 0.1
    lhs, rhs, diff = green_jensen_check(p, r)
    assert abs(diff) <= 1e-6  # repeated roots lose half the digits


def test_n_ddc_log_h0_closed_form():
    for r in (2.0, 10.0, 150.0):
        assert n_ddc_log_h0(LINE, r) == pytest.approx(-np.log(1 + r * r), abs=1e-10)


def test_nphi_fubini_study():
    assert nphi(lambda z: (1 + np.abs(z) ** 2) ** -2.0, 7.0) == pytest.approx(0.5 * np.log(50), rel=1e-9)


@pytest.mark.parametrize("eps", [0.1, 0.5])
def test_ahlfors_lhs_on_p1_against_radial_oracle(eps):
    """On P^1 with H = {x_0 = 0}: the density is (1+|z|^2)^{-1-eps}."""
    r = np.array([2.0, 20.0])
    rep = ahlfors_lld_check(LINE, LinearTarget.hyperplane([1, 0]), eps, r)
    for x, lhs in zip(r, rep.columns["lhs"]):
        oracle = integrate.quad(lambda t: (1 - (1 + t * t) ** -eps) / (eps * t), 0, x, epsabs=1e-13)[0]
        assert lhs == pytest.approx(eps * oracle, rel=1e-8)


def test_ahlfors_excess_slope_on_p1():
    """excess = (1 - (1+r^2)^-eps) - 1/2 log(1+r^2) - ... grows like -eps log r."""
    eps = 0.5
    r = np.geomspace(20, 2000, 10)
    rep = ahlfors_lld_check(LINE, LinearTarget.hyperplane([1, 0]), eps, r)
    assert rep.budget.slope == pytest.approx(-eps, abs=0.02)


def test_aald_point_target_on_p1_has_no_jet_term():
    rep = aald_check(LINE, SubschemeOnPn.point([1, 0]), R_GRID)
    assert np.all(rep.columns["m_jet"] == 0)
    assert rep.passed


def test_cartan_three_points_on_p1():
    rows = np.array([[0, 1], [1, -1], [1, 0]])
    cols = cartan_profile(LINE, rows, R_GRID)
    assert np.all(cols["N_W"] == 0)
    assert np.allclose(cols["RHS"], np.log(1 + R_GRID**2))
    budget = fit_budget(cols["excess"], R_GRID)
    assert budget.slope <= 0.02
    # hand computation: m_0 + m_1 + m_inf for r > 1
    lhs = 1.5 * np.log(1 + R_GRID**2) - 2 * np.log(R_GRID) + 0.5 * np.log(2)
    assert np.allclose(cols["LHS"], lhs, atol=1e-9)


def test_cartan_general_position_errors():
    concurrent = np.array([[1, 0, 0], [0, 1, 0], [1, 1, 0]])
    assert not general_position(concurrent)
    with pytest.raises(ValueError):
        cartan_profile(CONIC, concurrent, R_GRID)
    with pytest.raises(ValueError):
        cartan_profile(ProjectiveCurve([CPoly([1]), CPoly([0, 1]), CPoly([1, 1])]),
                       np.eye(3), R_GRID)


def test_points_smt_line_zero_and_infinity():
    cols = points_smt_profile(LINE, [[1, 0], [0, 1]], R_GRID)
    assert np.allclose(cols["m_P1"] + cols["m_P2"], np.log(1 + R_GRID**2) - np.log(R_GRID), atol=1e-9)
    assert np.all(cols["excess_wronskian"] <= 0)
    with pytest.raises(ValueError):
        points_smt_profile(LINE, [[1, 0], [2, 0]], R_GRID)


def test_exceptional_measure():
    r = np.linspace(0.1, 3, 30)
    got = exceptional_measure(r, r, 0.5)
    assert got == pytest.approx(0.9, abs=0.11)
    with pytest.raises(ValueError):
        exceptional_measure(-r, r, 0.5)
