"""Jets of ideals given by generators, and Wronskian membership/syzygy identities.

Everything here is generator-level: no Gröbner bases. Ideal comparisons use generator
sets where each generator is scaled to leading coefficient 1.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement
from typing import Sequence

import numpy as np

from .jets import (
    DEFAULT_MAX_ORDER,
    JetRing,
    derivative_table,
    jet_ring,
    lift,
    total_derivative,
    wronskian_jet,
)
from .poly import MPoly, Ring
from .scalars import exact_div


@dataclass(frozen=True)
class IdealModel:
    generators: tuple

    def __init__(self, generators: Sequence[MPoly]):
        gens = tuple(g for g in generators if not g.is_zero())
        if not gens:
            raise ValueError("ideal needs a nonzero generator")
        ring = gens[0].ring
        if any(g.ring != ring for g in gens):
            raise ValueError("variable registry mismatch")
        object.__setattr__(self, "generators", gens)

    @property
    def ring(self) -> Ring:
        return self.generators[0].ring


@dataclass(frozen=True)
class JetIdealModel:
    generators: tuple
    order: int
    ring: JetRing = field(compare=False)

    def normalized_set(self) -> frozenset:
        return frozenset(g.normalized() for g in self.generators)


def _dedup(gens) -> list[MPoly]:
    seen = set()
    out = []
    for g in gens:
        if g.is_zero():
            continue
        key = g.normalized()
        if key not in seen:
            seen.add(key)
            out.append(g)
    return out


def first_order_jet(gens: Sequence[MPoly]) -> list[MPoly]:
    """(g_1..g_s) -> (g_1..g_s, D g_1..D g_s)."""
    return _dedup(list(gens) + [total_derivative(g) for g in gens])


def jet_ideal(Z: IdealModel, k: int, max_order: int = DEFAULT_MAX_ORDER) -> JetIdealModel:
    """Z^(k) by iterating the first-order rule k times."""
    if k < 1:
        raise ValueError("k must be >= 1")
    ring = jet_ring(Z.ring.names, max(max_order, k))
    gens = _dedup(lift(g, ring) for g in Z.generators)
    for _ in range(k):
        gens = first_order_jet(gens)
    return JetIdealModel(tuple(gens), k, ring)


def jet_ideal_closed(Z: IdealModel, k: int, max_order: int = DEFAULT_MAX_ORDER) -> JetIdealModel:
    """Z^(k) as the D-closure {D^j g : 0 <= j <= k}."""
    ring = jet_ring(Z.ring.names, max(max_order, k))
    gens = []
    for g in Z.generators:
        gens.extend(derivative_table(lift(g, ring), k))
    return JetIdealModel(tuple(_dedup(gens)), k, ring)


def same_generators(a: JetIdealModel, b: JetIdealModel) -> bool:
    return a.normalized_set() == b.normalized_set()


def intersection_jets_check(ideals: Sequence[IdealModel], k: int) -> bool:
    """Jet of the ideal generated by all generators == union of the individual jets.

    Also checks that iterating the first-order rule agrees with the D-closure.
    """
    if not ideals:
        raise ValueError("need at least one ideal")
    union = IdealModel([g for Z in ideals for g in Z.generators])
    whole = jet_ideal(union, k)
    if not same_generators(whole, jet_ideal_closed(union, k)):
        return False
    parts = set()
    for Z in ideals:
        parts |= jet_ideal(Z, k).normalized_set()
    return whole.normalized_set() == frozenset(parts)


def power_formula_check(zeta: MPoly, l: int) -> bool:
    """Generators of (zeta^l)^(1) are zeta^l and l zeta^{l-1} D zeta, i.e. zeta^{l-1} (zeta, D zeta)."""
    if l < 1:
        raise ValueError("l must be >= 1")
    if zeta.is_zero():
        raise ValueError("zeta must be nonzero")
    J = jet_ideal(IdealModel([zeta ** l]), 1)
    z = lift(zeta, J.ring)
    dz = total_derivative(z)
    expected = [z ** l, z ** (l - 1) * dz * l]
    if J.normalized_set() != frozenset(e.normalized() for e in expected if not e.is_zero()):
        return False
    factored = frozenset((z ** (l - 1) * g).normalized() for g in (z, dz) if not g.is_zero())
    return J.normalized_set() == factored


# ---------------------------------------------------------------- membership certificates

def _divides(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


def divide(p: MPoly, divisors: Sequence[MPoly]) -> tuple[list[MPoly], MPoly]:
    """Multivariate division: p = sum q_i g_i + rem (graded order of MPoly.leading)."""
    ring = p.ring
    quots = [MPoly(ring) for _ in divisors]
    leads = [(ring.unpack(g.leading()[0]), g.leading()[1]) for g in divisors]
    rem = MPoly(ring)
    work = p
    while not work.is_zero():
        m, c = work.leading()
        e = ring.unpack(m)
        for i, (le, lc) in enumerate(leads):
            if _divides(le, e):
                t = MPoly(ring, {ring.pack([x - y for x, y in zip(e, le)]): exact_div(c, lc)})
                quots[i] = quots[i] + t
                work = work - t * divisors[i]
                break
        else:
            lt = MPoly(ring, {m: c})
            rem = rem + lt
            work = work - lt
    return quots, rem


def wronskian_membership_certificate(s_in: MPoly, s_other: MPoly, Z: IdealModel, ring: JetRing) -> bool:
    """W(s_in, s_other) written explicitly in the generators zeta_a, D zeta_a of Z^(1).

    With s_in = sum c_a zeta_a:
    W = sum_a (c_a D s_other - s_other D c_a) zeta_a - s_other c_a D zeta_a.
    """
    cof, rem = divide(s_in, list(Z.generators))
    if not rem.is_zero():
        raise ValueError("basis prefix element not in the ideal of Z")
    W = wronskian_jet([s_in, s_other], ring)
    so = lift(s_other, ring)
    dso = total_derivative(so)
    combo = MPoly(ring)
    for c, zeta in zip(cof, Z.generators):
        cj, zj = lift(c, ring), lift(zeta, ring)
        combo = combo + (cj * dso - so * total_derivative(cj)) * zj - so * cj * total_derivative(zj)
    return combo == W


def three_term_syzygy(a: MPoly, b: MPoly, c: MPoly, ring: JetRing) -> bool:
    """a W(b, c) == b W(a, c) - c W(a, b)."""
    A, B, C = (lift(x, ring) for x in (a, b, c))
    return A * wronskian_jet([b, c], ring) == B * wronskian_jet([a, c], ring) - C * wronskian_jet([a, b], ring)


def wronskian_sandwich_check(basis: Sequence[MPoly], prefix: int, Z: IdealModel | None = None) -> bool:
    """basis[:prefix] vanish on Z. Checks membership certificates and all three-term syzygies."""
    if not 1 <= prefix <= len(basis):
        raise ValueError("prefix length out of range")
    if Z is None:
        Z = IdealModel(basis[:prefix])
    ring = jet_ring(basis[0].ring.names, 1)
    for i_in in range(prefix):
        for i in range(len(basis)):
            if i != i_in and not wronskian_membership_certificate(basis[i_in], basis[i], Z, ring):
                return False
    for i, j, l in combinations(range(len(basis)), 3):
        for a, b, c in ((i, j, l), (j, i, l), (l, i, j)):
            if not three_term_syzygy(basis[a], basis[b], basis[c], ring):
                return False
    return True


# ---------------------------------------------------------------- separation of jets

def monomial_basis(ring: Ring, degree: int) -> list[MPoly]:
    """All monomials of exact degree `degree` in the ring's variables."""
    out = []
    for combo in combinations_with_replacement(range(ring.nvars), degree):
        exps = [0] * ring.nvars
        for i in combo:
            exps[i] += 1
        out.append(MPoly(ring, {ring.pack(exps): 1}))
    return out


def _derivative_values(tables: list[list[MPoly]], jet: np.ndarray) -> np.ndarray:
    """M[l, i] = (D^l s_i)(jet), jet[l, j] = f_j^(l)(0)."""
    vals = list(jet.ravel())
    k = len(tables[0]) - 1
    M = np.empty((k + 1, len(tables)), dtype=complex)
    for i, tab in enumerate(tables):
        for l in range(k + 1):
            P = tab[l]
            acc = 0j
            for m, c in P.terms.items():
                t = complex(c)
                for p, e in enumerate(P.ring.unpack(m)):
                    if e:
                        t *= vals[p] ** e
                acc += t
            M[l, i] = acc
    return M


def normalized_wronskian_minors(M: np.ndarray) -> np.ndarray:
    """|det M[:, I]| / prod_j ||M[:, j]|| over all (k+1)-subsets I of columns (Hadamard scale)."""
    k1 = M.shape[0]
    norms = np.linalg.norm(M, axis=0)
    out = []
    for I in combinations(range(M.shape[1]), k1):
        scale = float(np.prod(norms[list(I)]))
        d = abs(np.linalg.det(M[:, list(I)]))
        out.append(d / scale if scale > 0 else 0.0)
    return np.array(out)


@dataclass
class SeparationReport:
    regular_passed: int
    singular_passed: int
    trials: int
    min_regular: float
    max_singular: float

    @property
    def passed(self) -> bool:
        return self.regular_passed == self.trials and self.singular_passed == self.trials


def separation_sweep(n: int, d: int, k: int, trials: int, seed: int = 0,
                     regular_tol: float = 1e-9, singular_tol: float = 1e-12) -> SeparationReport:
    """Evaluate the Wronskians of the degree-d monomial system at random k-jets.

    Jets live in the affine chart x_0 = 1. Regular jets are Gaussian; singular jets have
    f'(0) = 0. Regular jets pass if some normalized minor exceeds regular_tol; singular
    jets pass if every normalized minor is at most singular_tol.
    """
    if d < k:
        raise ValueError("degree d < k does not separate k-jets")
    if n < 1 or k < 1:
        raise ValueError("need n >= 1 and k >= 1")
    names = tuple(f"x{i}" for i in range(n + 1))
    ring = jet_ring(names, k)
    base = Ring(names)
    tables = [derivative_table(lift(s, ring), k) for s in monomial_basis(base, d)]
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, n, d, k])))
    reg_ok = sing_ok = 0
    min_reg, max_sing = np.inf, 0.0
    width = ring.max_order + 1
    for _ in range(trials):
        jet = np.zeros((width, n + 1), dtype=complex)
        jet[0, 0] = 1.0
        jet[: k + 1, 1:] = rng.standard_normal((k + 1, n)) + 1j * rng.standard_normal((k + 1, n))
        v = normalized_wronskian_minors(_derivative_values(tables, jet)).max()
        min_reg = min(min_reg, v)
        reg_ok += int(v > regular_tol)
        jet[1, :] = 0.0
        v = normalized_wronskian_minors(_derivative_values(tables, jet)).max()
        max_sing = max(max_sing, v)
        sing_ok += int(v <= singular_tol)
    return SeparationReport(reg_ok, sing_ok, trials, float(min_reg), float(max_sing))


def separation_base_locus_check(n: int, d: int, k: int, trials: int, seed: int = 0) -> bool:
    return separation_sweep(n, d, k, trials, seed).passed
