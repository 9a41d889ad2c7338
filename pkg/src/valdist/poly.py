"""Univariate complex polynomials, sparse multivariate polynomials, roots and gcds.

CPoly keeps whatever scalar type it is given: exact (int, Fraction, QQi) inputs
stay exact through arithmetic, floats/complex go through IEEE doubles.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .scalars import QQi, exact_div, is_exact, normalize

DEFAULT_TOL = 1e-10
MAX_SWEEPS = 200


class ConvergenceError(RuntimeError):
    """Root iteration did not settle within the sweep budget."""


def _is_zero(c) -> bool:
    return c == 0


class CPoly:
    """Univariate polynomial with ascending coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [normalize(c) if is_exact(c) else c for c in coeffs]
        while cs and _is_zero(cs[-1]):
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def from_roots(cls, roots: Sequence, lead=1) -> "CPoly":
        p = cls([lead])
        for a in roots:
            p = p * cls([-a, 1])
        return p

    @classmethod
    def monomial(cls, k: int, c=1) -> "CPoly":
        return cls([0] * k + [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def exact(self) -> bool:
        return all(is_exact(c) for c in self.coeffs)

    @property
    def lead(self):
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def _lift(self, other) -> "CPoly":
        return other if isinstance(other, CPoly) else CPoly([other])

    def __add__(self, other):
        o = self._lift(other)
        a, b = self.coeffs, o.coeffs
        n = max(len(a), len(b))
        return CPoly((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return CPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, CPoly):
            return CPoly(c * other for c in self.coeffs)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return CPoly()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if _is_zero(x):
                continue
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
        return CPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = CPoly([1])
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, CPoly):
            other = CPoly([other])
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"CPoly({list(self.coeffs)!r})"

    def __call__(self, z):
        """Horner evaluation; z may be a scalar or a numpy array."""
        if isinstance(z, np.ndarray):
            acc = np.zeros(z.shape, dtype=complex)
            for c in reversed(self.coeffs):
                acc = acc * z + complex(c)
            return acc
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def derivative(self, times: int = 1) -> "CPoly":
        p = self
        for _ in range(times):
            p = CPoly(i * c for i, c in enumerate(p.coeffs) if i > 0)
        return p

    def compose(self, q: "CPoly") -> "CPoly":
        """p(q(z))."""
        out = CPoly()
        for c in reversed(self.coeffs):
            out = out * q + c
        return out

    def shift(self, z0) -> "CPoly":
        """p(z + z0), the Taylor expansion at z0."""
        return self.compose(CPoly([z0, 1]))

    def divmod(self, d: "CPoly") -> tuple["CPoly", "CPoly"]:
        if d.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dd = d.degree
        if len(rem) - 1 < dd:
            return CPoly(), self
        quot = [0] * (len(rem) - dd)
        for k in range(len(rem) - 1 - dd, -1, -1):
            c = exact_div(rem[k + dd], d.lead)
            quot[k] = c
            if _is_zero(c):
                continue
            for j, dc in enumerate(d.coeffs):
                rem[k + j] = rem[k + j] - c * dc
        return CPoly(quot), CPoly(rem[:dd])

    def __floordiv__(self, d: "CPoly") -> "CPoly":
        return self.divmod(d)[0]

    def __mod__(self, d: "CPoly") -> "CPoly":
        return self.divmod(d)[1]

    def monic(self) -> "CPoly":
        if self.is_zero():
            return self
        lc = self.lead
        return CPoly(exact_div(c, lc) for c in self.coeffs)

    def to_numpy(self) -> np.ndarray:
        """Ascending complex coefficient array."""
        return np.array([complex(c) for c in self.coeffs], dtype=complex)

    def to_float(self) -> "CPoly":
        return CPoly(complex(c) for c in self.coeffs)

    def order_at(self, z0=0, tol: float = DEFAULT_TOL) -> int:
        """Order of vanishing at z0.

        Exact inputs: trailing zero coefficients of the Taylor shift.
        Floating inputs: multiplicity of the root near z0.
        """
        if self.is_zero():
            raise ValueError("order of the zero polynomial is infinite")
        if self.exact and is_exact(z0):
            s = self.shift(z0) if z0 != 0 else self
            k = 0
            while _is_zero(s.coeffs[k]):
                k += 1
            return k
        total = 0
        for a, m in roots_with_multiplicity(self, tol):
            if abs(a - complex(z0)) <= max(1e-6, math.sqrt(tol)) * (1 + abs(a)):
                total += m
        return total


def coeff_scale(p: CPoly) -> float:
    return max((abs(complex(c)) for c in p.coeffs), default=0.0)


# ---------------------------------------------------------------- gcd

def _exact_gcd(p: CPoly, q: CPoly) -> CPoly:
    a, b = p, q
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def _trim_small(p: CPoly, tol: float, scale: float) -> CPoly:
    cs = list(p.coeffs)
    while cs and abs(complex(cs[-1])) <= tol * scale:
        cs.pop()
    return CPoly(cs)


def _float_gcd(p: CPoly, q: CPoly, tol: float) -> CPoly:
    a = p.to_float()
    b = q.to_float()
    if a.degree < b.degree:
        a, b = b, a
    a = CPoly(c / coeff_scale(a) for c in a.coeffs)
    while not b.is_zero():
        b = CPoly(c / coeff_scale(b) for c in b.coeffs)
        r = _trim_small(a % b, tol, 1.0)
        a, b = b, r
    return a.monic()


def poly_gcd(p: CPoly, q: CPoly, tol: float = DEFAULT_TOL) -> CPoly:
    """Monic gcd. Exact Euclid when both inputs are exact."""
    if p.is_zero() and q.is_zero():
        raise ValueError("gcd of two zero polynomials")
    if p.is_zero():
        return q.monic()
    if q.is_zero():
        return p.monic()
    if p.exact and q.exact:
        return _exact_gcd(p, q)
    return _float_gcd(p, q, tol)


def squarefree_decomposition(p: CPoly, tol: float = DEFAULT_TOL) -> list[tuple[CPoly, int]]:
    """Yun's algorithm: p = lead * prod a_i^i with a_i square-free, pairwise coprime."""
    if p.degree < 1:
        return []
    dp = p.derivative()
    a0 = poly_gcd(p, dp, tol)
    b = p // a0
    c = dp // a0
    d = c - b.derivative()
    out = []
    i = 1
    while b.degree >= 1:
        a = poly_gcd(b, d, tol)
        b = b // a
        c = d // a
        d = c - b.derivative()
        if a.degree >= 1:
            out.append((a, i))
        i += 1
        if i > p.degree + 1:
            break
    return out


# ---------------------------------------------------------------- roots

def aberth(p: CPoly, tol: float = DEFAULT_TOL, max_sweeps: int = MAX_SWEEPS) -> np.ndarray:
    """Simultaneous Aberth-Ehrlich iteration for all roots of p."""
    c = p.to_numpy()
    m = len(c) - 1
    if m < 1:
        return np.zeros(0, dtype=complex)
    c = c / c[-1]
    if m == 1:
        return np.array([-c[0]])
    desc = c[::-1]
    ddesc = np.polyder(desc)
    # Fujiwara-type bound for the initial circle
    radius = 2 * max(abs(c[m - k]) ** (1.0 / k) for k in range(1, m + 1))
    radius = max(radius, 1e-12)
    geo = abs(c[0]) ** (1.0 / m) if c[0] != 0 else radius / 2
    r0 = min(radius, max(geo, 1e-3 * radius))
    z = r0 * np.exp(1j * (2 * np.pi * np.arange(m) / m + 0.4))
    eps = np.finfo(float).eps
    for _ in range(max_sweeps):
        pv = np.polyval(desc, z)
        dv = np.polyval(ddesc, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            w = pv / dv
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            corr = w / (1.0 - w * inv.sum(axis=1))
        corr = np.where(np.isfinite(corr), corr, 0.0)
        corr = np.where(pv == 0, 0.0, corr)
        z = z - corr
        if np.all(np.abs(corr) <= 8 * eps * (1 + np.abs(z))):
            return z
    # accept if the residual is at rounding level
    pv = np.abs(np.polyval(desc, z))
    bound = np.polyval(np.abs(desc), np.abs(z))
    if np.all(pv <= max(tol, 1e3 * eps) * np.maximum(bound, 1.0)):
        return z
    raise ConvergenceError(f"Aberth iteration did not converge in {max_sweeps} sweeps")


def _cluster(roots: list[tuple[complex, int]], radius: float) -> list[tuple[complex, int]]:
    merged: list[list] = []
    for a, m in roots:
        for item in merged:
            if abs(item[0] - a) <= radius * (1 + abs(a)):
                tot = item[1] + m
                item[0] = (item[0] * item[1] + a * m) / tot
                item[1] = tot
                break
        else:
            merged.append([complex(a), m])
    return [(complex(a), int(m)) for a, m in merged]


def roots_with_multiplicity(p: CPoly, tol: float = DEFAULT_TOL) -> list[tuple[complex, int]]:
    """Roots with multiplicities, sorted by (real, imag)."""
    if p.is_zero():
        raise ValueError("roots of the zero polynomial")
    if p.degree < 1:
        return []
    found: list[tuple[complex, int]] = []
    parts = squarefree_decomposition(p, tol)
    if sum(a.degree * i for a, i in parts) == p.degree:
        for a, i in parts:
            found.extend((complex(z), i) for z in aberth(a, tol))
        found = _cluster(found, tol)
    else:
        # inconsistent numeric square-free split: cluster raw roots instead
        raw = aberth(p, tol)
        found = _cluster([(complex(z), 1) for z in raw], max(tol, 1e-6))
    found.sort(key=lambda t: (round(t[0].real, 12), round(t[0].imag, 12)))
    return found


# ---------------------------------------------------------------- multivariate

@dataclass(frozen=True)
class Ring:
    """Variable registry. Monomials are packed into one int, `bits` per exponent."""

    names: tuple
    bits: int = 16

    @property
    def nvars(self) -> int:
        return len(self.names)

    @property
    def mask(self) -> int:
        return (1 << self.bits) - 1

    def pack(self, exps: Sequence[int]) -> int:
        m = 0
        for i, e in enumerate(exps):
            if e:
                if e < 0 or e > self.mask:
                    raise ValueError(f"exponent {e} out of range")
                m |= e << (self.bits * i)
        return m

    def unpack(self, m: int) -> tuple:
        out = []
        mask = self.mask
        for _ in range(self.nvars):
            out.append(m & mask)
            m >>= self.bits
        return tuple(out)

    def unit(self, i: int) -> int:
        return 1 << (self.bits * i)

    def var(self, i: int) -> "MPoly":
        return MPoly(self, {self.unit(i): 1})

    def gens(self) -> list["MPoly"]:
        return [self.var(i) for i in range(self.nvars)]

    def const(self, c) -> "MPoly":
        return MPoly(self, {0: c})


def poly_ring(*names: str) -> Ring:
    return Ring(tuple(names))


class MPoly:
    """Sparse polynomial over a Ring with exact scalar coefficients."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: Ring, terms: dict | None = None):
        self.ring = ring
        clean = {}
        for m, c in (terms or {}).items():
            if c != 0:
                clean[m] = normalize(c) if is_exact(c) else c
        self.terms = clean

    # construction helpers
    @classmethod
    def from_dict(cls, ring: Ring, d: dict) -> "MPoly":
        """Build from {exponent tuple: coefficient}."""
        out: dict = {}
        for exps, c in d.items():
            m = ring.pack(exps)
            out[m] = out.get(m, 0) + c
        return cls(ring, out)

    def _check(self, other: "MPoly"):
        if other.ring != self.ring:
            raise ValueError("variable registry mismatch")

    def _lift(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            self._check(other)
            return other
        return MPoly(self.ring, {0: other})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        o = self._lift(other)
        out = dict(self.terms)
        for m, c in o.terms.items():
            out[m] = out.get(m, 0) + c
        return MPoly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        o = self._lift(other)
        out = dict(self.terms)
        for m, c in o.terms.items():
            out[m] = out.get(m, 0) - c
        return MPoly(self.ring, out)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            if other == 0:
                return MPoly(self.ring)
            return MPoly(self.ring, {m: c * other for m, c in self.terms.items()})
        self._check(other)
        out: dict = {}
        get = out.get
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1 + m2
                out[m] = get(m, 0) + c1 * c2
        return MPoly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = MPoly(self.ring, {0: 1})
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.ring == other.ring and self.terms == other.terms
        return self.terms == ({0: other} if other != 0 else {})

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    # structure
    def exponents(self, m: int) -> tuple:
        return self.ring.unpack(m)

    def items(self):
        """(exponent tuple, coefficient) in graded-lex order, highest first."""
        ring = self.ring
        rows = [(ring.unpack(m), c) for m, c in self.terms.items()]
        rows.sort(key=lambda t: (sum(t[0]), t[0][::-1]), reverse=True)
        return rows

    def total_degree(self) -> int:
        return max((sum(self.ring.unpack(m)) for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        degs = {sum(self.ring.unpack(m)) for m in self.terms}
        return len(degs) <= 1

    def leading(self) -> tuple[int, object]:
        """(packed monomial, coefficient) of the graded-lex leading term."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        ring = self.ring
        m = max(self.terms, key=lambda t: (sum(ring.unpack(t)), ring.unpack(t)[::-1]))
        return m, self.terms[m]

    def normalized(self) -> "MPoly":
        """Scale so the leading coefficient is 1."""
        if not self.terms:
            return self
        _, c = self.leading()
        return MPoly(self.ring, {m: exact_div(v, c) for m, v in self.terms.items()})

    def diff(self, i: int) -> "MPoly":
        ring = self.ring
        shift = ring.bits * i
        mask = ring.mask
        unit = ring.unit(i)
        out = {}
        for m, c in self.terms.items():
            e = (m >> shift) & mask
            if e:
                out[m - unit] = out.get(m - unit, 0) + c * e
        return MPoly(ring, out)

    def __call__(self, *values):
        """Substitute values (numbers, arrays, CPoly, MPoly) for the variables."""
        if len(values) == 1 and isinstance(values[0], (list, tuple)):
            values = tuple(values[0])
        if len(values) != self.ring.nvars:
            raise ValueError("wrong number of values")
        cache: dict = {}

        def power(i, e):
            key = (i, e)
            if key not in cache:
                cache[key] = values[i] if e == 1 else power(i, e - 1) * values[i]
            return cache[key]

        total = None
        for m, c in self.terms.items():
            term = None
            for i, e in enumerate(self.ring.unpack(m)):
                if e:
                    term = power(i, e) if term is None else term * power(i, e)
            term = c if term is None else term * c
            total = term if total is None else total + term
        if total is None:
            total = 0
        return total

    def substitute(self, images: Sequence["MPoly"], target: Ring) -> "MPoly":
        """Substitute MPolys over `target` for each variable."""
        out = MPoly(target)
        cache: dict = {}
        for m, c in self.terms.items():
            term = MPoly(target, {0: c})
            for i, e in enumerate(self.ring.unpack(m)):
                if e:
                    key = (i, e)
                    if key not in cache:
                        cache[key] = images[i] ** e
                    term = term * cache[key]
            out = out + term
        return out

    def exact_quotient(self, d: "MPoly") -> "MPoly | None":
        """self / d if d divides self exactly, else None (graded-lex division)."""
        self._check(d)
        if d.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        ring = self.ring
        dm, dc = d.leading()
        dexp = ring.unpack(dm)
        rem = MPoly(ring, dict(self.terms))
        quot: dict = {}
        while rem.terms:
            rm, rc = rem.leading()
            rexp = ring.unpack(rm)
            if any(a < b for a, b in zip(rexp, dexp)):
                return None
            qm = rm - dm
            qc = exact_div(rc, dc)
            quot[qm] = quot.get(qm, 0) + qc
            rem = rem - MPoly(ring, {qm: qc}) * d
        return MPoly(ring, quot)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps, c in self.items():
            mono = "*".join(
                f"{n}^{e}" if e > 1 else str(n) for n, e in zip(self.ring.names, exps) if e
            )
            parts.append(f"({c})*{mono}" if mono else f"({c})")
        return " + ".join(parts)


def random_exact_cpoly(rng: np.random.Generator, degree: int, lo: int = -5, hi: int = 5) -> CPoly:
    cs = [int(v) for v in rng.integers(lo, hi + 1, size=degree + 1)]
    if cs[-1] == 0:
        cs[-1] = 1
    return CPoly(cs)


__all__ = [
    "CPoly",
    "MPoly",
    "Ring",
    "QQi",
    "Fraction",
    "ConvergenceError",
    "poly_ring",
    "poly_gcd",
    "roots_with_multiplicity",
    "squarefree_decomposition",
    "aberth",
]
