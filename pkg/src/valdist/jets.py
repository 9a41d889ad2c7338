"""Exact jet-differential calculus in the variables x_j^(l).

A JetRing packs x_j^(l) at position l * nvars + j, so order-0 variables share the packing
of the base ring x_0..x_{n}: base polynomials lift to jet polynomials without rewriting.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Sequence

import numpy as np

from .poly import MPoly, Ring
from .scalars import exact_div

DEFAULT_MAX_ORDER = 6


class OrderOverflowError(ValueError):
    """Total derivative would exceed the configured jet order."""


@dataclass(frozen=True)
class JetRing(Ring):
    base_vars: int = 1
    max_order: int = DEFAULT_MAX_ORDER

    def pos(self, j: int, l: int) -> int:
        return l * self.base_vars + j

    def x(self, j: int, l: int = 0) -> MPoly:
        if not 0 <= l <= self.max_order:
            raise OrderOverflowError(f"order {l} beyond {self.max_order}")
        return self.var(self.pos(j, l))

    def base_ring(self) -> Ring:
        return Ring(tuple(self.names[: self.base_vars]), self.bits)

    def order_exponents(self, m: int) -> list[int]:
        """l_i = total exponent of order-i variables, i = 0..max_order."""
        e = self.unpack(m)
        n = self.base_vars
        return [sum(e[i * n:(i + 1) * n]) for i in range(self.max_order + 1)]


def jet_ring(base_names: Sequence[str], max_order: int = DEFAULT_MAX_ORDER) -> JetRing:
    names = tuple(f"{v}^({l})" if l else v for l in range(max_order + 1) for v in base_names)
    return JetRing(names, 16, len(base_names), max_order)


def lift(sigma: MPoly, ring: JetRing) -> MPoly:
    """View a base polynomial as an order-0 jet polynomial."""
    if sigma.ring.nvars != ring.base_vars or sigma.ring.bits != ring.bits:
        if isinstance(sigma.ring, JetRing) and sigma.ring == ring:
            return sigma
        raise ValueError("variable registry mismatch")
    return MPoly(ring, dict(sigma.terms))


def _as_jet(P: MPoly) -> JetRing:
    if not isinstance(P.ring, JetRing):
        raise TypeError("expected a jet polynomial")
    return P.ring


def total_derivative(P: MPoly) -> MPoly:
    """D with D(x_j^(l)) = x_j^(l+1) and Leibniz."""
    ring = _as_jet(P)
    bits, mask, n = ring.bits, ring.mask, ring.base_vars
    top = ring.max_order * n
    out: dict = {}
    get = out.get
    for m, c in P.terms.items():
        rest, p = m, 0
        while rest:
            e = rest & mask
            if e:
                if p >= top:
                    raise OrderOverflowError("total derivative exceeds the maximal jet order")
                m2 = m - (1 << (bits * p)) + (1 << (bits * (p + n)))
                out[m2] = get(m2, 0) + c * e
            rest >>= bits
            p += 1
    return MPoly(ring, out)


def iterated_derivative(P: MPoly, times: int) -> MPoly:
    for _ in range(times):
        P = total_derivative(P)
    return P


def derivative_table(sigma: MPoly, k: int) -> list[MPoly]:
    out = [sigma]
    for _ in range(k):
        out.append(total_derivative(out[-1]))
    return out


def det(matrix: Sequence[Sequence]):
    """Laplace expansion along rows with memoized column subsets (any ring elements)."""
    size = len(matrix)
    if size == 0:
        return 1
    memo: dict = {}

    def minor(r: int, cols: tuple):
        if r == size:
            return None  # multiplicative identity
        key = (r, cols)
        if key in memo:
            return memo[key]
        acc = None
        for pos, c in enumerate(cols):
            entry = matrix[r][c]
            if _is_zero(entry):
                continue
            sub = minor(r + 1, cols[:pos] + cols[pos + 1:])
            if sub is not None and _is_zero(sub):
                continue
            term = entry if sub is None else entry * sub
            if pos % 2:
                term = -term
            acc = term if acc is None else acc + term
        if acc is None:
            acc = _zero_like(matrix)
        memo[key] = acc
        return acc

    return minor(0, tuple(range(size)))


def _is_zero(x) -> bool:
    if isinstance(x, MPoly):
        return x.is_zero()
    if isinstance(x, JetFraction):
        return x.num.is_zero()
    return x == 0


def _zero_like(matrix):
    for row in matrix:
        for e in row:
            if isinstance(e, MPoly):
                return MPoly(e.ring)
            if isinstance(e, JetFraction):
                return JetFraction(MPoly(e.num.ring), e.base, 0)
    return 0


def wronskian_jet(sections: Sequence[MPoly], ring: JetRing | None = None) -> MPoly:
    """det[D^l sigma_j]_{l, j = 0..k}."""
    k = len(sections) - 1
    if ring is None:
        ring = jet_ring(sections[0].ring.names)
    cols = [derivative_table(lift(s, ring), k) for s in sections]
    return det([[cols[j][l] for j in range(k + 1)] for l in range(k + 1)])


# ---------------------------------------------------------------- grading

def weights(P: MPoly) -> set[int]:
    ring = _as_jet(P)
    return {sum(i * li for i, li in enumerate(ring.order_exponents(m))) for m in P.terms}


def weighted_degree(P: MPoly) -> int:
    """Weight of an isobaric polynomial (0 for the zero polynomial)."""
    w = weights(P)
    if len(w) > 1:
        raise ValueError("polynomial is not isobaric")
    return w.pop() if w else 0


def _partial(ls: list[int], s: int) -> tuple[int, int]:
    below = sum(i * ls[i] for i in range(1, min(s, len(ls) - 1) + 1))
    above = sum((i - s) * ls[i] for i in range(s + 1, len(ls)))
    return below, above


def partial_degrees(P: MPoly, s: int) -> tuple[int, int, int]:
    """(min |l|_s, max |l|_s, max |l|_{>s}) over the monomials of P.

    |l|_s = l_1 + 2 l_2 + ... + s l_s and |l|_{>s} = l_{s+1} + 2 l_{s+2} + ... ,
    where l_i is the total degree in the order-i variables.
    """
    ring = _as_jet(P)
    if P.is_zero():
        return 0, 0, 0
    stats = [_partial(ring.order_exponents(m), s) for m in P.terms]
    lows = [b for b, _ in stats]
    return min(lows), max(lows), max(a for _, a in stats)


def filtration_check(P: MPoly, a: Sequence[int]) -> bool:
    """Every monomial satisfies |l|_{>s} <= a_{s+1} + ... + a_k for s = 0..k-1."""
    ring = _as_jet(P)
    w = weights(P)
    if len(w) > 1:
        raise ValueError("filtration check needs an isobaric polynomial")
    k = len(a)
    if w and w.pop() != sum(a):
        return False
    tails = [sum(a[s:]) for s in range(k)]
    for m in P.terms:
        ls = ring.order_exponents(m)
        if any(ls[i] for i in range(k + 1, len(ls))):
            return False
        for s in range(k):
            if _partial(ls, s)[1] > tails[s]:
                return False
    return True


@dataclass(frozen=True)
class JetGrading:
    k: int

    @property
    def k_prime(self) -> int:
        return self.k * (self.k + 1) // 2

    @property
    def a(self) -> tuple:
        return tuple(range(self.k, 0, -1))

    @property
    def b(self) -> tuple:
        k = self.k
        return tuple(j * (2 * k - j + 1) // 2 for j in range(1, k + 1))


# ---------------------------------------------------------------- substitutions

@dataclass(frozen=True)
class ReparamJet:
    """phi(z) = a_1 z + a_2 z^2 + ... + a_k z^k, a_1 != 0."""

    coeffs: tuple

    def __post_init__(self):
        if not self.coeffs or self.coeffs[0] == 0:
            raise ValueError("a_1 must be nonzero")

    def derivative_at_zero(self, i: int):
        """phi^(i)(0) = i! a_i."""
        if i < 1 or i > len(self.coeffs):
            return 0
        return factorial(i) * self.coeffs[i - 1]


@lru_cache(maxsize=None)
def _bell_table(values: tuple, n_max: int) -> dict:
    """Partial Bell polynomials B_{n,k}(x_1, x_2, ...) evaluated at values."""
    x = (0,) + values
    B = {(0, 0): 1}
    for n in range(1, n_max + 1):
        B[(n, 0)] = 0
        for k in range(1, n + 1):
            acc = 0
            for i in range(1, n - k + 2):
                xi = x[i] if i < len(x) else 0
                if xi:
                    acc += comb(n - 1, i - 1) * xi * B.get((n - i, k - 1), 0)
            B[(n, k)] = acc
    return B


def _order_max(P: MPoly) -> int:
    ring = _as_jet(P)
    top = 0
    for m in P.terms:
        ls = ring.order_exponents(m)
        for i, li in enumerate(ls):
            if li:
                top = max(top, i)
    return top


def reparametrize(P: MPoly, phi: ReparamJet) -> MPoly:
    """Substitute x_j^(l) by (f_j o phi)^(l)(0) = sum_s B_{l,s}(phi'(0), phi''(0), ...) x_j^(s).

    The substitution is triangular in l, so positions are replaced one at a time in
    increasing order: a later step only introduces variables that were already replaced.
    """
    ring = _as_jet(P)
    top = _order_max(P)
    vals = tuple(phi.derivative_at_zero(i) for i in range(1, top + 1))
    B = _bell_table(vals, top)
    terms = dict(P.terms)
    for l in range(1, top + 1):
        for j in range(ring.base_vars):
            image = {ring.unit(ring.pos(j, s)): B[(l, s)] for s in range(1, l + 1) if B[(l, s)]}
            terms = _substitute_position(terms, ring, ring.pos(j, l), image)
    return MPoly(ring, terms)


def _substitute_position(terms: dict, ring: Ring, p: int, image: dict) -> dict:
    """Replace variable p by the linear form `image` (packed monomial -> coefficient)."""
    shift, mask, unit = ring.bits * p, ring.mask, ring.unit(p)
    powers = [{0: 1}]
    out: dict = {}
    for m, c in terms.items():
        e = (m >> shift) & mask
        if not e:
            out[m] = out.get(m, 0) + c
            continue
        while len(powers) <= e:
            prev, nxt = powers[-1], {}
            for a, ca in prev.items():
                for b, cb in image.items():
                    nxt[a + b] = nxt.get(a + b, 0) + ca * cb
            powers.append(nxt)
        base = m - e * unit
        for a, ca in powers[e].items():
            out[base + a] = out.get(base + a, 0) + c * ca
    return {m: c for m, c in out.items() if c != 0}


def coordinate_change(P: MPoly, psi: Sequence[MPoly]) -> MPoly:
    """Substitute x_j^(l) by D^l(Psi_j), Psi_j polynomials in the base variables."""
    ring = _as_jet(P)
    if len(psi) != ring.base_vars:
        raise ValueError("need one image per base coordinate")
    top = _order_max(P)
    tables = [derivative_table(lift(p, ring), top) for p in psi]
    images = []
    for l in range(ring.max_order + 1):
        for j in range(ring.base_vars):
            images.append(tables[j][l] if l <= top else ring.x(j, l))
    return P.substitute(images, ring)


def exact_det(A: Sequence[Sequence]):
    """Determinant of an exact matrix by fraction Gaussian elimination."""
    M = [[Fraction(x) if not hasattr(x, "re") else x for x in row] for row in A]
    n = len(M)
    sign = 1
    out = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            M[c], M[p] = M[p], M[c]
            sign = -sign
        out = out * M[c][c]
        for r in range(c + 1, n):
            if M[r][c] != 0:
                f = exact_div(M[r][c], M[c][c])
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    out = sign * out
    return out.numerator if isinstance(out, Fraction) and out.denominator == 1 else out


def apply_matrix(A: Sequence[Sequence], sections: Sequence[MPoly]) -> list[MPoly]:
    """tau_i = sum_j A[i][j] sigma_j."""
    out = []
    for row in A:
        acc = MPoly(sections[0].ring)
        for c, s in zip(row, sections):
            if c:
                acc = acc + s * c
        out.append(acc)
    return out


def sl_action_check(A: Sequence[Sequence], sections: Sequence[MPoly]) -> bool:
    """W(A . sigma) == det(A) W(sigma), exactly."""
    if len(A) != len(sections) or any(len(row) != len(A) for row in A):
        raise ValueError("matrix must be square of size k+1")
    return wronskian_jet(apply_matrix(A, sections)) == wronskian_jet(sections) * exact_det(A)


# ---------------------------------------------------------------- logarithmic Wronskians

class JetFraction:
    """num / base^exp with base a fixed base polynomial sigma_D."""

    __slots__ = ("num", "base", "exp")

    def __init__(self, num: MPoly, base: MPoly, exp: int):
        if exp < 0:
            raise ValueError("negative denominator exponent")
        self.num, self.base, self.exp = num, base, exp

    def _raise(self, e: int) -> MPoly:
        return self.num * self.base ** (e - self.exp) if e > self.exp else self.num

    def _lift(self, other) -> "JetFraction":
        if isinstance(other, JetFraction):
            if other.base != self.base:
                raise ValueError("denominator bases differ")
            return other
        return JetFraction(self.num.ring.const(1) * other if not isinstance(other, MPoly) else other, self.base, 0)

    def __add__(self, other):
        o = self._lift(other)
        e = max(self.exp, o.exp)
        return JetFraction(self._raise(e) + o._raise(e), self.base, e)

    __radd__ = __add__

    def __neg__(self):
        return JetFraction(-self.num, self.base, self.exp)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __mul__(self, other):
        o = self._lift(other)
        return JetFraction(self.num * o.num, self.base, self.exp + o.exp)

    __rmul__ = __mul__

    def reduced(self) -> "JetFraction":
        num, e = self.num, self.exp
        while e > 0 and not num.is_zero():
            q = num.exact_quotient(self.base)
            if q is None:
                break
            num, e = q, e - 1
        if num.is_zero():
            e = 0
        return JetFraction(num, self.base, e)

    def __eq__(self, other):
        o = self._lift(other)
        e = max(self.exp, o.exp)
        return self._raise(e) == o._raise(e)

    def __repr__(self):
        return f"({self.num}) / ({self.base})^{self.exp}"


def _nabla_numerators(sigma: MPoly, sigma_D: MPoly, top: int) -> list[MPoly]:
    """N_l with nabla^l sigma = N_l / sigma_D^l, from
    D^l sigma = sum_i C(l, i) (D^{l-i} sigma_D / sigma_D) nabla^i sigma."""
    Ds = derivative_table(sigma, top)
    DD = derivative_table(sigma_D, top)
    pw = [sigma_D ** 0]
    for _ in range(top):
        pw.append(pw[-1] * sigma_D)
    nums = [sigma]
    for l in range(1, top + 1):
        acc = pw[l] * Ds[l]
        for i in range(l):
            acc = acc - DD[l - i] * nums[i] * pw[l - 1 - i] * comb(l, i)
        nums.append(acc)
    return nums


def log_nabla(sigma: MPoly, sigma_D: MPoly, l: int, ring: JetRing | None = None) -> JetFraction:
    """nabla_D^l sigma = sigma_D * D^l(sigma / sigma_D) as a reduced JetFraction."""
    if sigma_D.is_zero():
        raise ZeroDivisionError("sigma_D is zero")
    if ring is None:
        ring = sigma.ring if isinstance(sigma.ring, JetRing) else jet_ring(sigma.ring.names)
    s, d = lift(sigma, ring), lift(sigma_D, ring)
    return JetFraction(_nabla_numerators(s, d, l)[l], d, l).reduced()


def log_wronskian(sigma_D: MPoly, sigma_0: MPoly, others: Sequence[MPoly], ring: JetRing) -> JetFraction:
    """W_D(sigma_0; sigma_1..sigma_k): first column D^l sigma_0, others nabla^l sigma_j."""
    k = len(others)
    d = lift(sigma_D, ring)
    col0 = derivative_table(lift(sigma_0, ring), k)
    cols = [[JetFraction(x, d, 0) for x in col0]]
    for s in others:
        nums = _nabla_numerators(lift(s, ring), d, k)
        cols.append([JetFraction(nums[l], d, l) for l in range(k + 1)])
    return det([[cols[j][l] for j in range(k + 1)] for l in range(k + 1)])


def log_wronskian_identity_check(sigma_D: MPoly, sigma_0: MPoly, others: Sequence[MPoly]) -> bool:
    """W(sigma_D sigma_0, sigma_1..sigma_k) == sigma_D * W_D(sigma_0; sigma_1..sigma_k)."""
    ring = jet_ring(sigma_0.ring.names)
    lhs = wronskian_jet([sigma_D * sigma_0, *others], ring)
    rhs = log_wronskian(sigma_D, sigma_0, others, ring) * lift(sigma_D, ring)
    return rhs == JetFraction(lhs, rhs.base, 0)


def tower_wronskian_identity_check(sigma: MPoly, varsigma: Sequence[MPoly]) -> bool:
    """det[D^l W(sigma, s_j)]_{l, j = 0..k} == sigma^k W(sigma, s_0, ..., s_k)."""
    k = len(varsigma) - 1
    if k < 1:
        raise ValueError("need k >= 1")
    ring = jet_ring(sigma.ring.names)
    cols = [derivative_table(wronskian_jet([sigma, s], ring), k) for s in varsigma]
    lhs = det([[cols[j][l] for j in range(k + 1)] for l in range(k + 1)])
    rhs = lift(sigma, ring) ** k * wronskian_jet([sigma, *varsigma], ring)
    return lhs == rhs


# ---------------------------------------------------------------- evaluation

def jet_evaluate(P: MPoly, jet):
    """Substitute jet[l][j] = f_j^(l)(z0). Exact jets give exact values."""
    ring = _as_jet(P)
    top = _order_max(P)
    if len(jet) <= top:
        raise ValueError(f"jet supplies orders up to {len(jet) - 1}, need {top}")
    values = []
    for l in range(ring.max_order + 1):
        for j in range(ring.base_vars):
            values.append(jet[l][j] if l < len(jet) else 0)
    numeric = any(isinstance(v, (float, complex, np.floating, np.complexfloating)) for row in jet for v in row)
    if numeric:
        out = 0j
        for m, c in P.terms.items():
            term = complex(c)
            for i, e in enumerate(ring.unpack(m)):
                if e:
                    term *= complex(values[i]) ** e
            out += term
        return out
    return P(*values)


def curve_jet(components: Sequence, k: int, z0=0) -> list[list]:
    """jet[l][j] = f_j^(l)(z0) for CPoly components."""
    out = []
    derivs = list(components)
    for _ in range(k + 1):
        out.append([p(z0) for p in derivs])
        derivs = [p.derivative() for p in derivs]
    return out


def random_section(rng: np.random.Generator, ring: Ring, degree: int, lo: int = -3, hi: int = 3,
                   density: float = 0.7, homogeneous: bool = False) -> MPoly:
    """Random polynomial with small integer coefficients (never zero)."""
    from itertools import product

    n = ring.nvars
    terms = {}
    for exps in product(range(degree + 1), repeat=n):
        tot = sum(exps)
        if tot > degree or (homogeneous and tot != degree):
            continue
        if rng.random() < density:
            c = int(rng.integers(lo, hi + 1))
            if c:
                terms[ring.pack(exps)] = c
    if not terms:
        exps = [0] * n
        exps[0] = degree
        terms[ring.pack(exps)] = 1
    return MPoly(ring, terms)


__all__ = [
    "JetRing", "jet_ring", "lift", "total_derivative", "iterated_derivative", "wronskian_jet",
    "weighted_degree", "partial_degrees", "filtration_check", "JetGrading", "ReparamJet",
    "reparametrize", "coordinate_change", "sl_action_check", "JetFraction", "log_nabla",
    "log_wronskian", "log_wronskian_identity_check", "tower_wronskian_identity_check",
    "jet_evaluate", "curve_jet", "random_section", "exact_det",
]
