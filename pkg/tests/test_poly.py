from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from valdist.poly import (
    CPoly,
    MPoly,
    aberth,
    poly_gcd,
    poly_ring,
    roots_with_multiplicity,
    squarefree_decomposition,
)
from valdist.scalars import QQi, exact_div, normalize, parse_exact

z = sp.Symbol("z")
ints = st.integers(-6, 6)
small_polys = st.lists(ints, min_size=1, max_size=6).map(CPoly)


def to_sympy(p: CPoly):
    return sp.Poly(list(reversed([sp.Rational(c.numerator, c.denominator) if isinstance(c, Fraction) else c
                                  for c in p.coeffs])) or [0], z)


# ---------------------------------------------------------------- scalars

def test_qqi_field_ops():
    a, b = QQi(1, 2), QQi(Fraction(1, 3), -1)
    assert (a * b) / b == a
    assert a - a == 0 and isinstance(a - a, int)
    assert normalize(QQi(Fraction(4, 2), 0)) == 2
    assert QQi(0, 1) ** 2 == -1
    assert exact_div(1, 3) == Fraction(1, 3)
    with pytest.raises(ZeroDivisionError):
        QQi(1, 1) / QQi(0, 0)


def test_parse_exact_forms():
    assert parse_exact([3, 6]) == Fraction(1, 2)
    assert parse_exact([[1, 2], [3, 4]]) == QQi(Fraction(1, 2), Fraction(3, 4))
    assert parse_exact("5/10") == Fraction(1, 2)


# ---------------------------------------------------------------- univariate

@given(small_polys, small_polys)
def test_mul_matches_sympy(p, q):
    assert to_sympy(p * q) == to_sympy(p) * to_sympy(q)


@given(small_polys, small_polys.filter(lambda d: not d.is_zero()))
def test_divmod_identity(p, d):
    q, r = p.divmod(d)
    assert q * d + r == p
    assert r.is_zero() or r.degree < d.degree


@given(small_polys, small_polys)
def test_exact_gcd_matches_sympy(p, q):
    if p.is_zero() and q.is_zero():
        return
    g = poly_gcd(p, q)
    oracle = sp.gcd(to_sympy(p), to_sympy(q)).monic()
    assert sp.expand(to_sympy(g).as_expr() - oracle.as_expr()) == 0


def test_float_gcd_recovers_common_factor():
    common = CPoly.from_roots([0.3 + 0.1j, -1.2])
    p = (common * CPoly.from_roots([2.0, 1j])).to_float()
    q = (common * CPoly.from_roots([-0.5j])).to_float()
    g = poly_gcd(p, q)
    assert g.degree == 2
    got = sorted(aberth(g), key=lambda c: c.real)
    assert np.allclose(got, sorted([-1.2, 0.3 + 0.1j], key=lambda c: c.real), atol=1e-9)


def test_squarefree_decomposition_multiplicities():
    p = CPoly.from_roots([1, 1, 1, 2, 2, 3])
    parts = squarefree_decomposition(p)
    mults = {i: a.degree for a, i in parts}
    assert mults == {1: 1, 2: 1, 3: 1}


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4), st.integers(1, 3)), min_size=1, max_size=4,
                unique_by=lambda t: (t[0], t[1])))
def test_roots_with_multiplicity_recovers_factorization(spec):
    roots = []
    for a, b, m in spec:
        roots += [QQi(Fraction(a, 2), Fraction(b, 2))] * m
    p = CPoly.from_roots(roots)
    got = roots_with_multiplicity(p)
    assert sum(m for _, m in got) == p.degree
    for a, b, m in spec:
        target = complex(a / 2, b / 2)
        match = [mm for r, mm in got if abs(r - target) < 1e-6]
        assert match == [m]


def test_aberth_against_numpy():
    rng = np.random.default_rng(3)
    c = rng.normal(size=9) + 1j * rng.normal(size=9)
    got = np.sort_complex(aberth(CPoly(c)))
    ref = np.sort_complex(np.roots(c[::-1]))
    assert np.allclose(got, ref, atol=1e-9)


def test_order_at_exact_and_float():
    p = CPoly.from_roots([Fraction(1, 2)] * 3 + [2])
    assert p.order_at(Fraction(1, 2)) == 3
    assert p.to_float().order_at(0.5) == 3
    assert p.order_at(0) == 0
    with pytest.raises(ValueError):
        CPoly().order_at(0)


@given(small_polys, st.integers(-3, 3))
def test_shift_and_compose(p, a):
    assert p.shift(a)(0) == p(a)
    assert p.compose(CPoly([0, 1])) == p


# ---------------------------------------------------------------- multivariate

R = poly_ring("x", "y", "w")
x, y, w = R.gens()
sx, sy, sw = sp.symbols("x y w")


def mpoly_strategy():
    term = st.tuples(st.integers(-4, 4), st.tuples(*[st.integers(0, 3)] * 3))
    return st.lists(term, max_size=5).map(
        lambda ts: MPoly.from_dict(R, {e: c for c, e in ts}))


def to_sympy_m(P: MPoly):
    return sp.expand(sum((c * sx ** e[0] * sy ** e[1] * sw ** e[2] for e, c in P.items()), sp.Integer(0)))


@given(mpoly_strategy(), mpoly_strategy())
def test_mpoly_ring_ops_match_sympy(P, Q):
    assert sp.expand(to_sympy_m(P * Q) - to_sympy_m(P) * to_sympy_m(Q)) == 0
    assert sp.expand(to_sympy_m(P - Q) - to_sympy_m(P) + to_sympy_m(Q)) == 0
    assert sp.expand(to_sympy_m(P.diff(1)) - sp.diff(to_sympy_m(P), sy)) == 0


@given(mpoly_strategy(), mpoly_strategy().filter(lambda d: not d.is_zero()))
def test_exact_quotient(P, D):
    assert (P * D).exact_quotient(D) == P


def test_registry_mismatch():
    other = poly_ring("x", "y")
    with pytest.raises(ValueError):
        x + other.var(0)


def test_substitute_and_call():
    P = x * x * y + w * 3
    assert P(2, 3, 1) == 15
    S = poly_ring("s", "t")
    s, t = S.gens()
    Q = P.substitute([s + t, s, t], S)
    assert Q == (s + t) ** 2 * s + t * 3


def test_normalized_leading_one():
    P = x * 3 + y * 6
    assert P.normalized().leading()[1] == 1
    assert (P * Fraction(-2, 7)).normalized() == P.normalized()
