"""Rational curves in P^n, derived curves F^k, contact functions and Plücker densities."""
from __future__ import annotations

import threading
from typing import Sequence

import numpy as np

from .exterior import (
    ExteriorCovector,
    ExteriorVector,
    contraction_matrix,
    subsets,
)
from .poly import DEFAULT_TOL, CPoly, poly_gcd, roots_with_multiplicity


_CACHE_LOCK = threading.RLock()


class DegenerateCurveError(ValueError):
    """Curve lies in a linear subspace (some F^k vanishes identically)."""


def _det_cpoly(rows: list[list[CPoly]]) -> CPoly:
    """Laplace expansion along the first row with memoized minors."""
    size = len(rows)
    memo: dict = {}

    def minor(r: int, cols: tuple) -> CPoly:
        if r == size:
            return CPoly([1])
        key = (r, cols)
        if key in memo:
            return memo[key]
        out = CPoly()
        for pos, c in enumerate(cols):
            entry = rows[r][c]
            if entry.is_zero():
                continue
            rest = cols[:pos] + cols[pos + 1:]
            term = entry * minor(r + 1, rest)
            out = out + term if pos % 2 == 0 else out - term
        memo[key] = out
        return out

    return minor(0, tuple(range(size)))


class ProjectiveCurve:
    """Reduced representation F = (f_0, ..., f_n) of a rational curve."""

    def __init__(self, components: Sequence[CPoly]):
        comps = tuple(c if isinstance(c, CPoly) else CPoly(c) for c in components)
        if len(comps) < 2:
            raise ValueError("need at least two components")
        if all(c.is_zero() for c in comps):
            raise ValueError("all components are zero")
        self.components = comps

    @property
    def n(self) -> int:
        return len(self.components) - 1

    @property
    def degree(self) -> int:
        return max(c.degree for c in self.components)

    @property
    def exact(self) -> bool:
        return all(c.exact for c in self.components)

    def __repr__(self):
        return f"ProjectiveCurve({list(self.components)!r})"

    def scaled(self, c) -> "ProjectiveCurve":
        return ProjectiveCurve([p * c for p in self.components])

    # ------------------------------------------------------------ evaluation
    def derivatives(self, k: int) -> list[list[CPoly]]:
        """derivatives(k)[l][j] = f_j^(l)."""
        with _CACHE_LOCK:
            cache = self.__dict__.setdefault("_deriv_cache", [list(self.components)])
            while len(cache) <= k:
                cache.append([p.derivative() for p in cache[-1]])
            return cache[: k + 1]

    def _numpy_derivs(self, k: int) -> list[list[np.ndarray]]:
        with _CACHE_LOCK:
            cache = self.__dict__.setdefault("_np_cache", {})
            if k not in cache:
                cache[k] = [[p.to_numpy()[::-1] for p in row] for row in self.derivatives(k)]
            return cache[k]

    def jet_matrix(self, z, k: int) -> np.ndarray:
        """Array (..., k+1, n+1) with entries f_j^(l)(z)."""
        z = np.asarray(z, dtype=complex)
        rows = self._numpy_derivs(k)
        out = np.empty(z.shape + (k + 1, self.n + 1), dtype=complex)
        for l, row in enumerate(rows):
            for j, c in enumerate(row):
                out[..., l, j] = np.polyval(c, z) if len(c) else 0.0
        return out

    def __call__(self, z) -> np.ndarray:
        return self.jet_matrix(z, 0)[..., 0, :]

    def derived_array(self, z, k: int) -> np.ndarray:
        """Plücker coordinates of F^k(z), ordered by subsets(n+1, k+1)."""
        if not 0 <= k <= self.n:
            raise ValueError("k must lie in 0..n")
        M = self.jet_matrix(z, k)
        subs = subsets(self.n + 1, k + 1)
        out = np.empty(M.shape[:-2] + (len(subs),), dtype=complex)
        for i, I in enumerate(subs):
            out[..., i] = np.linalg.det(M[..., :, list(I)]) if k else M[..., 0, I[0]]
        return out

    def derived_norm2(self, z, k: int) -> np.ndarray:
        """|F^k(z)|^2 with |F^{-1}| = 1 and F^{n+1} = 0."""
        z = np.asarray(z, dtype=complex)
        if k < 0:
            return np.ones(z.shape)
        if k > self.n:
            return np.zeros(z.shape)
        return np.sum(np.abs(self.derived_array(z, k)) ** 2, axis=-1)

    # ------------------------------------------------------------ symbolic
    def derived_polys(self, k: int) -> dict:
        """{subset: minor CPoly} for F^k."""
        if not 0 <= k <= self.n:
            raise ValueError("k must lie in 0..n")
        with _CACHE_LOCK:
            cache = self.__dict__.setdefault("_minor_cache", {})
            if k not in cache:
                D = self.derivatives(k)
                cache[k] = {
                    I: _det_cpoly([[D[l][j] for j in I] for l in range(k + 1)])
                    for I in subsets(self.n + 1, k + 1)
                }
            return cache[k]

    @property
    def wronskian(self) -> CPoly:
        return next(iter(self.derived_polys(self.n).values()))

    def is_degenerate(self) -> bool:
        return self.wronskian.is_zero()


def reduce_representation(polys: Sequence, tol: float = DEFAULT_TOL) -> ProjectiveCurve:
    """Divide out the common gcd of the components."""
    comps = [p if isinstance(p, CPoly) else CPoly(p) for p in polys]
    if len(comps) < 2:
        raise ValueError("need at least two components")
    nonzero = [p for p in comps if not p.is_zero()]
    if not nonzero:
        raise ValueError("all components are zero")
    g = nonzero[0]
    for p in nonzero[1:]:
        g = poly_gcd(g, p, tol)
        if g.degree == 0:
            break
    if g.degree >= 1:
        comps = [p // g for p in comps]
    return ProjectiveCurve(comps)


def derived_vector(f: ProjectiveCurve, k: int, z: complex) -> ExteriorVector:
    arr = f.derived_array(complex(z), k)
    return ExteriorVector(
        f.n + 1, k + 1, {I: complex(c) for I, c in zip(subsets(f.n + 1, k + 1), arr) if c != 0}
    )


def wronskian_poly(f: ProjectiveCurve) -> CPoly:
    return f.wronskian


class LinearTarget:
    """Linear subspace given by a unit normal covector of level codim."""

    def __init__(self, normal: ExteriorCovector, normalize: bool = True):
        norm = np.sqrt(normal.norm2())
        if norm == 0:
            raise ValueError("zero normal covector")
        if normalize:
            normal = ExteriorCovector(normal.ambient, normal.level, {k: v / norm for k, v in normal.coeffs.items()})
        elif abs(norm - 1) > 1e-12:
            raise ValueError("normal must have unit norm")
        self.normal = normal

    @classmethod
    def hyperplane(cls, coeffs) -> "LinearTarget":
        return cls(ExteriorCovector.from_vector(coeffs))

    @classmethod
    def intersection(cls, *hyperplanes) -> "LinearTarget":
        """Span of hyperplane covectors a_1 ^ ... ^ a_m, normalized."""
        amb = len(hyperplanes[0])
        acc = ExteriorCovector(amb, 0, {(): 1.0})
        for a in hyperplanes:
            w = acc.wedge(ExteriorCovector.from_vector(a))
            acc = ExteriorCovector(amb, w.level, w.coeffs)
        return cls(acc)

    @property
    def ambient(self) -> int:
        return self.normal.ambient

    @property
    def codim(self) -> int:
        return self.normal.level

    def coefficient_vector(self) -> np.ndarray:
        if self.codim != 1:
            raise ValueError("not a hyperplane")
        return self.normal.as_array()


def _contact(f: ProjectiveCurve, H: LinearTarget, k: int, z) -> tuple[np.ndarray, np.ndarray]:
    if H.ambient != f.n + 1:
        raise ValueError("target ambient does not match curve")
    if not H.codim - 1 <= k <= f.n:
        raise ValueError("k out of range for this target")
    key = (k, H.codim, H.normal.as_array().tobytes())
    with _CACHE_LOCK:
        cache = f.__dict__.setdefault("_contact_cache", {})
        if key not in cache:
            cache[key] = contraction_matrix(H.normal, k + 1)
        C = cache[key]
    Fk = f.derived_array(z, k)
    num = np.sum(np.abs(Fk @ C.T) ** 2, axis=-1)
    den = np.sum(np.abs(Fk) ** 2, axis=-1)
    return num, den


def contact_function(f: ProjectiveCurve, H: LinearTarget, k: int, z):
    """phi_k(H) = |F^k _| a|^2 / |F^k|^2; vectorized over z."""
    num, den = _contact(f, H, k, z)
    if np.any(den == 0):
        raise ValueError("F^k vanishes at an evaluation point")
    out = num / den
    return float(out) if np.ndim(out) == 0 else out


def plucker_density(f: ProjectiveCurve, k: int, z):
    """h_k = |F^{k-1}|^2 |F^{k+1}|^2 / |F^k|^4; vectorized over z."""
    if not 0 <= k <= f.n:
        raise ValueError("k must lie in 0..n")
    if k >= 1 and f.derived_polys(k) and all(p.is_zero() for p in f.derived_polys(k).values()):
        raise DegenerateCurveError(f"F^{k} vanishes identically")
    den = f.derived_norm2(z, k)
    if np.any(den == 0):
        raise ValueError("F^k vanishes at an evaluation point")
    out = f.derived_norm2(z, k - 1) * f.derived_norm2(z, k + 1) / den**2
    return float(out) if np.ndim(out) == 0 else out


def vanishing_orders(f: ProjectiveCurve, z0=0, tol: float = DEFAULT_TOL) -> tuple:
    """(nu_1, ..., nu_n) from o_k = ord_{z0} F^k via nu_k = o_k - 2 o_{k-1} + o_{k-2}."""
    orders = [0]  # o_0: reduced representation does not vanish
    for k in range(1, f.n + 1):
        minors = [p for p in f.derived_polys(k).values() if not p.is_zero()]
        if not minors:
            raise DegenerateCurveError(f"F^{k} vanishes identically")
        orders.append(min(p.order_at(z0, tol) for p in minors))
    o = [0] + orders  # o[-1 shifted] = 0
    return tuple(o[k + 1] - 2 * o[k] + o[k - 1] for k in range(1, f.n + 1))


def derived_orders(f: ProjectiveCurve, z0=0, tol: float = DEFAULT_TOL) -> tuple:
    """(o_1, ..., o_n) with o_k the order of vanishing of F^k at z0."""
    out = []
    for k in range(1, f.n + 1):
        minors = [p for p in f.derived_polys(k).values() if not p.is_zero()]
        if not minors:
            raise DegenerateCurveError(f"F^{k} vanishes identically")
        out.append(min(p.order_at(z0, tol) for p in minors))
    return tuple(out)


def stationary_points(f: ProjectiveCurve, k: int, tol: float = DEFAULT_TOL) -> list[complex]:
    """Common zeros of the Plücker coordinates of F^k."""
    minors = [p for p in f.derived_polys(k).values() if not p.is_zero()]
    if not minors:
        raise DegenerateCurveError(f"F^{k} vanishes identically")
    g = minors[0]
    for p in minors[1:]:
        g = poly_gcd(g, p, tol)
        if g.degree == 0:
            return []
    return [a for a, _ in roots_with_multiplicity(g, tol)] if g.degree >= 1 else []
