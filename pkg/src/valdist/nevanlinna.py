"""Weil functions, proximity/counting/characteristic functions and desk checks.

Conventions:
  lambda_Z(x) = -log max_i |g_i(x)| / ||x||^{d_i}
  m_f(r, Z)   = circle average of lambda_Z o f on |z| = r
  N_f(r, Z)   = m_0 log r + sum_{0<|a|<=r} m_a log(r/|a|),  m_a = min_i ord_a(g_i o F)
  T_f(r, O(d)) = d * (circle average of log||F|| - log||F(0)||)
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Sequence

import numpy as np

from .curves import LinearTarget, ProjectiveCurve, _contact
from .poly import DEFAULT_TOL, CPoly, MPoly, Ring, poly_gcd, roots_with_multiplicity
from .quadrature import (
    DiskQuadratureSpec,
    QuadratureSpec,
    circle_average,
    log_weighted_disk_integrals,
)


class SupportError(ValueError):
    """The curve lies inside the support of the target."""


def coordinate_ring(n: int) -> Ring:
    return Ring(tuple(f"x{i}" for i in range(n + 1)))


def linear_form(coeffs: Sequence, ring: Ring) -> MPoly:
    return MPoly(ring, {ring.unit(i): c for i, c in enumerate(coeffs) if c != 0})


@dataclass
class SubschemeOnPn:
    """Closed subscheme of P^n cut out by homogeneous generators."""

    n: int
    generators: list
    scales: list | None = None  # per-generator factor applied inside the Weil function

    def __post_init__(self):
        scales = self.scales or [1.0] * len(self.generators)
        kept = [(g, s) for g, s in zip(self.generators, scales) if not g.is_zero()]
        gens = [g for g, _ in kept]
        if not gens:
            raise ValueError("generator list is empty")
        for g in gens:
            if g.ring.nvars != self.n + 1:
                raise ValueError("generator ring does not match ambient dimension")
            if not g.is_homogeneous():
                raise ValueError("generators must be homogeneous")
        self.generators = gens
        self.scales = [float(s) for _, s in kept]
        self.degrees = [g.total_degree() for g in gens]
        self._numeric = [_numeric_form(g) for g in gens]

    @classmethod
    def hyperplane(cls, coeffs: Sequence) -> "SubschemeOnPn":
        norm = float(np.linalg.norm([complex(c) for c in coeffs]))
        if norm == 0:
            raise ValueError("zero hyperplane")
        n = len(coeffs) - 1
        return cls(n, [linear_form(list(coeffs), coordinate_ring(n))], [1.0 / norm])

    @classmethod
    def intersection_of_hyperplanes(cls, rows: Sequence[Sequence]) -> "SubschemeOnPn":
        parts = [cls.hyperplane(row) for row in rows]
        return cls(len(rows[0]) - 1, [p.generators[0] for p in parts], [p.scales[0] for p in parts])

    @classmethod
    def point(cls, p: Sequence) -> "SubschemeOnPn":
        """Ideal of a point: the 2x2 minors x_i p_j - x_j p_i, normalized by ||p||."""
        norm = float(np.linalg.norm([complex(c) for c in p]))
        if norm == 0:
            raise ValueError("zero representative")
        n = len(p) - 1
        ring = coordinate_ring(n)
        gens = []
        for i, j in combinations(range(n + 1), 2):
            cs = [0] * (n + 1)
            cs[i] = p[j]
            cs[j] = -p[i]
            gens.append(linear_form(cs, ring))
        return cls(n, gens, [1.0 / norm] * len(gens))

    def hyperplane_rows(self) -> np.ndarray:
        """Coefficient rows when all generators are linear."""
        if any(d != 1 for d in self.degrees):
            raise ValueError("not cut out by hyperplanes")
        rows = np.zeros((len(self.generators), self.n + 1), dtype=complex)
        for k, g in enumerate(self.generators):
            for m, c in g.terms.items():
                rows[k, g.ring.unpack(m).index(1)] = complex(c) * self.scales[k]
        return rows

    def pullback(self, f: ProjectiveCurve) -> list[CPoly]:
        """g_i o F as univariate polynomials."""
        return [g(*f.components) for g in self.generators]


def _numeric_form(g: MPoly):
    exps = np.array([g.ring.unpack(m) for m in g.terms], dtype=int)
    coefs = np.array([complex(c) for c in g.terms.values()])
    return exps, coefs


def _eval_numeric(form, X: np.ndarray) -> np.ndarray:
    exps, coefs = form
    out = np.zeros(X.shape[:-1], dtype=complex)
    for e, c in zip(exps, coefs):
        term = np.full(X.shape[:-1], c, dtype=complex)
        for i, k in enumerate(e):
            if k:
                term = term * X[..., i] ** k
        out = out + term
    return out


class WeilEvaluator:
    """lambda_Z(x) = -log max_i |g_i(x)| / ||x||^{d_i}."""

    def __init__(self, subscheme: SubschemeOnPn):
        self.subscheme = subscheme

    def __call__(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=complex)
        norm = np.linalg.norm(X, axis=-1)
        if np.any(norm == 0):
            raise ValueError("zero representative")
        best = np.zeros(X.shape[:-1])
        sub = self.subscheme
        for form, d, s in zip(sub._numeric, sub.degrees, sub.scales):
            best = np.maximum(best, s * np.abs(_eval_numeric(form, X)) / norm**d)
        with np.errstate(divide="ignore"):
            return -np.log(best)


def weil_value(Z: WeilEvaluator | SubschemeOnPn, x) -> float:
    """Scalar Weil value; +inf on Supp Z."""
    ev = Z if isinstance(Z, WeilEvaluator) else WeilEvaluator(Z)
    return float(ev(np.asarray(x, dtype=complex)))


def _as_evaluator(Z) -> WeilEvaluator:
    return Z if isinstance(Z, WeilEvaluator) else WeilEvaluator(Z)


def _check_support(f: ProjectiveCurve, Z: SubschemeOnPn) -> list[CPoly]:
    pulled = Z.pullback(f)
    if all(p.is_zero() for p in pulled):
        raise SupportError("curve lies in the support of the target")
    return pulled


def proximity(f: ProjectiveCurve, Z, r: float, quad: QuadratureSpec = QuadratureSpec()) -> tuple[float, float]:
    """m_f(r, Z) and an absolute error estimate."""
    ev = _as_evaluator(Z)
    _check_support(f, ev.subscheme)
    return circle_average(lambda th: ev(f(r * np.exp(1j * th))), quad)


def common_zeros(f: ProjectiveCurve, Z: SubschemeOnPn, tol: float = DEFAULT_TOL) -> list[tuple[complex, int]]:
    """Zeros of f^*Z with multiplicity min_i ord(g_i o F)."""
    pulled = [p for p in _check_support(f, Z) if not p.is_zero()]
    g = pulled[0]
    for p in pulled[1:]:
        g = poly_gcd(g, p, tol)
    if g.degree < 1:
        return []
    return roots_with_multiplicity(g, tol)


def counting_from_zeros(zeros: Sequence[tuple[complex, int]], r: float, origin_tol: float = 1e-12) -> float:
    total = 0.0
    for a, m in zeros:
        if abs(a) <= origin_tol:
            total += m * np.log(r)
        elif abs(a) <= r:
            total += m * np.log(r / abs(a))
    return float(total)


def counting(f: ProjectiveCurve, Z: SubschemeOnPn, r: float, tol: float = DEFAULT_TOL) -> float:
    return counting_from_zeros(common_zeros(f, Z, tol), r)


def log_norm_average(f: ProjectiveCurve, r: float, quad: QuadratureSpec = QuadratureSpec()) -> tuple[float, float]:
    return circle_average(lambda th: np.log(np.linalg.norm(f(r * np.exp(1j * th)), axis=-1)), quad, cap=False)


def characteristic(f: ProjectiveCurve, d: int, r: float, quad: QuadratureSpec = QuadratureSpec()) -> float:
    """T_f(r, O(d))."""
    avg, _ = log_norm_average(f, r, quad)
    return float(d * (avg - np.log(np.linalg.norm(f(0.0)))))


@dataclass
class NevanlinnaProfile:
    r: np.ndarray
    m: np.ndarray
    N: np.ndarray
    T: np.ndarray
    residual: np.ndarray
    error: np.ndarray = field(default=None)


@dataclass
class ErrorBudget:
    constant: float
    max_excess: float
    exceptional: np.ndarray
    slope: float = 0.0
    spread: float = 0.0


def fit_budget(excess: np.ndarray, r: np.ndarray, limit: float | None = None) -> ErrorBudget:
    """Bounded-excess summary: fitted constant = max excess, least-squares slope in log r."""
    excess = np.asarray(excess, dtype=float)
    logr = np.log(np.asarray(r, dtype=float))
    slope = float(np.polyfit(logr, excess, 1)[0]) if len(r) > 1 else 0.0
    c = float(np.max(excess))
    flags = excess > (c if limit is None else limit)
    return ErrorBudget(constant=c, max_excess=c, exceptional=flags, slope=slope,
                       spread=float(np.std(excess)))


def fmt_residual(f: ProjectiveCurve, Z: SubschemeOnPn, r_grid: Sequence[float],
                 quad: QuadratureSpec = QuadratureSpec()) -> tuple[NevanlinnaProfile, ErrorBudget]:
    """residual(r) = T(r, O(d)) - m(r) - N(r) for a divisor Z of degree d."""
    if len(Z.generators) != 1:
        raise ValueError("FMT residual needs a divisor (single generator)")
    d = Z.degrees[0]
    zeros = common_zeros(f, Z)
    ev = WeilEvaluator(Z)
    r_grid = np.asarray(r_grid, dtype=float)
    m = np.empty(len(r_grid))
    err = np.empty(len(r_grid))
    N = np.empty(len(r_grid))
    T = np.empty(len(r_grid))
    log0 = np.log(np.linalg.norm(f(0.0)))
    for i, r in enumerate(r_grid):
        m[i], e1 = circle_average(lambda th: ev(f(r * np.exp(1j * th))), quad)
        avg, e2 = log_norm_average(f, r, quad)
        T[i] = d * (avg - log0)
        N[i] = counting_from_zeros(zeros, r)
        err[i] = e1 + d * e2
    res = T - m - N
    prof = NevanlinnaProfile(r_grid, m, N, T, res, err)
    mean = float(np.mean(res))
    dev = np.abs(res - mean)
    budget = ErrorBudget(constant=mean, max_excess=float(dev.max()),
                         exceptional=dev > 5 * np.maximum(err, 1e-12), spread=float(np.std(res)))
    return prof, budget


def green_jensen_check(p: CPoly, r: float, quad: QuadratureSpec = QuadratureSpec()) -> tuple[float, float, float]:
    """Zero side sum m_a log(r/|a|) (with m_0 log r) against (1/2)(avg log|p|^2 - log|p~(0)|^2)."""
    if p.is_zero():
        raise ValueError("zero polynomial")
    m0 = 0
    while p.coeffs[m0] == 0:
        m0 += 1
    lhs = m0 * np.log(r)
    if p.degree > m0:
        reduced = CPoly(p.coeffs[m0:])
        lhs += counting_from_zeros(roots_with_multiplicity(reduced), r)
    c = p.to_numpy()[::-1]
    avg, _ = circle_average(lambda th: np.log(np.abs(np.polyval(c, r * np.exp(1j * th))) ** 2), quad, cap=False)
    rhs = 0.5 * (avg - np.log(abs(complex(p.coeffs[m0])) ** 2))
    return float(lhs), float(rhs), float(lhs - rhs)


def nphi(psi: Callable[[np.ndarray], np.ndarray], r: float, quad: DiskQuadratureSpec = DiskQuadratureSpec(),
         singular_points: Sequence[complex] = ()) -> float:
    """N(psi dd^c|z|^2, r) = (1/pi) int_{|z|<r} psi log(r/|z|) dA."""
    return float(log_weighted_disk_integrals(psi, [r], singular_points, quad)[0])


def nphi_profile(psi, r_grid, quad: DiskQuadratureSpec = DiskQuadratureSpec(), singular_points=()) -> np.ndarray:
    return log_weighted_disk_integrals(psi, r_grid, singular_points, quad)


# ---------------------------------------------------------------- h_0 and jets of hyperplanes

def n_ddc_log_h0(f: ProjectiveCurve, r: float, quad: QuadratureSpec = QuadratureSpec()) -> float:
    """N(dd^c[log h_0], r) by Green-Jensen, h_0 = |F^1|^2 / |F|^4.

    The Lelong number at the origin is ord_0 F^1; the regular part at 0 uses the
    lowest-order Taylor coefficients of the Plücker coordinates of F^1.
    """
    if f.n < 1:
        raise ValueError("need n >= 1")
    minors = [p for p in f.derived_polys(1).values() if not p.is_zero()]
    if not minors:
        raise ValueError("constant curve: F^1 vanishes identically")
    o = min(p.order_at(0) if p.exact else _float_order0(p) for p in minors)
    lead = sum(abs(complex(p.coeffs[o])) ** 2 for p in minors if len(p.coeffs) > o)
    g0 = np.log(lead) - 2 * np.log(np.linalg.norm(f(0.0)) ** 2)
    avg, _ = circle_average(
        lambda th: np.log(f.derived_norm2(r * np.exp(1j * th), 1))
        - 2 * np.log(f.derived_norm2(r * np.exp(1j * th), 0)), quad, cap=False)
    return float(0.5 * (avg - g0))


def _float_order0(p: CPoly, tol: float = 1e-13) -> int:
    scale = max(abs(complex(c)) for c in p.coeffs)
    k = 0
    while abs(complex(p.coeffs[k])) <= tol * scale:
        k += 1
    return k


def contact_weil(f: ProjectiveCurve, rows: np.ndarray, k: int, z) -> np.ndarray:
    """min over hyperplanes a_i of -(1/2) log phi_k(H_i) (jet-Weil function of Z^(k))."""
    out = None
    for a in rows:
        H = LinearTarget.hyperplane(a)
        num, den = _contact(f, H, k, z)
        with np.errstate(divide="ignore"):
            lam = -0.5 * np.log(num / den)
        out = lam if out is None else np.minimum(out, lam)
    return out


@dataclass
class CheckReport:
    r: np.ndarray
    columns: dict
    budget: ErrorBudget
    passed: bool
    notes: dict = field(default_factory=dict)


def ahlfors_density(f: ProjectiveCurve, H: LinearTarget, eps: float) -> Callable[[np.ndarray], np.ndarray]:
    """(phi_1 / phi_0^{1-eps}) h_0 = |F^1 _| a|^2 |F|^{-4} phi_0^{eps-1}."""
    if H.codim != 1:
        raise ValueError("Ahlfors density needs a hyperplane")
    a = H.coefficient_vector()

    def psi(z):
        z = np.asarray(z, dtype=complex)
        num1, _ = _contact(f, H, 1, z)
        F = f(z)
        nF2 = np.sum(np.abs(F) ** 2, axis=-1)
        phi0 = np.abs(F @ a) ** 2 / nF2
        with np.errstate(divide="ignore"):
            return num1 / nF2**2 * phi0 ** (eps - 1.0)

    return psi


def ahlfors_lld_check(f: ProjectiveCurve, H: LinearTarget, eps: float, r_grid: Sequence[float],
                      quad: QuadratureSpec = QuadratureSpec(),
                      disk: DiskQuadratureSpec = DiskQuadratureSpec(),
                      slope_tol: float = 0.02) -> CheckReport:
    """lhs = eps * N((phi_1/phi_0^{1-eps}) Omega_0, r), rhs = (1+eps) T_f(r, O(1))."""
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    if f.derived_polys(1) and all(p.is_zero() for p in f.derived_polys(1).values()):
        raise ValueError("constant curve")
    Z = SubschemeOnPn.hyperplane(H.coefficient_vector())
    zeros = [a for a, _ in common_zeros(f, Z)]
    r_grid = np.asarray(r_grid, dtype=float)
    N = nphi_profile(ahlfors_density(f, H, eps), r_grid, disk, zeros)
    lhs = eps * N
    T = np.array([characteristic(f, 1, r, quad) for r in r_grid])
    rhs = (1 + eps) * T
    excess = lhs - rhs
    budget = fit_budget(excess, r_grid)
    passed = bool(abs(budget.slope) <= slope_tol)
    return CheckReport(r_grid, {"lhs": lhs, "rhs": rhs, "T": T, "excess": excess}, budget, passed,
                       {"eps": eps})


def aald_check(f: ProjectiveCurve, Z: SubschemeOnPn, r_grid: Sequence[float],
               quad: QuadratureSpec = QuadratureSpec(), slope_tol: float = 0.02) -> CheckReport:
    """excess = m_f(r, Z) + N(dd^c log h_0, r) - m_{f[1]}(r, Z^(1)) for Z cut out by hyperplanes."""
    rows = Z.hyperplane_rows()
    rows = rows / np.linalg.norm(rows, axis=1, keepdims=True)
    _check_support(f, Z)
    ev = WeilEvaluator(Z)
    r_grid = np.asarray(r_grid, dtype=float)
    m = np.empty(len(r_grid))
    m1 = np.empty(len(r_grid))
    nh = np.empty(len(r_grid))
    for i, r in enumerate(r_grid):
        m[i], _ = circle_average(lambda th: ev(f(r * np.exp(1j * th))), quad)
        nh[i] = n_ddc_log_h0(f, r, quad)
        # on P^1, phi_1 == 1 so this term vanishes: Z^(1) is empty for a point
        m1[i], _ = circle_average(lambda th: contact_weil(f, rows, 1, r * np.exp(1j * th)), quad)
    excess = m + nh - m1
    budget = fit_budget(excess, r_grid)
    passed = bool(budget.slope <= slope_tol)
    return CheckReport(r_grid, {"m": m, "N_ddc_log_h0": nh, "m_jet": m1, "excess": excess}, budget, passed)


def exceptional_measure(h: Sequence[float], r: Sequence[float], delta: float) -> float:
    """Trapezoid measure of {r : h'(r) > h(r)^{1+delta}} on a uniform grid."""
    h = np.asarray(h, dtype=float)
    r = np.asarray(r, dtype=float)
    if np.any(np.diff(h) < 0):
        raise ValueError("h must be nondecreasing")
    if len(r) < 2:
        return 0.0
    step = np.diff(r)
    if not np.allclose(step, step[0], rtol=1e-9, atol=0):
        raise ValueError("grid must be uniform")
    dh = np.gradient(h, r)
    bad = (dh > np.power(np.maximum(h, 0.0), 1 + delta)).astype(float)
    return float(np.sum(step * (bad[:-1] + bad[1:]) / 2))


# ---------------------------------------------------------------- Cartan and point-target profiles

def general_position(rows: np.ndarray, tol: float = 1e-9) -> bool:
    """Every subset of at most n+1 hyperplanes is linearly independent."""
    rows = np.asarray(rows, dtype=complex)
    q, amb = rows.shape
    k = min(q, amb)
    for I in combinations(range(q), k):
        s = np.linalg.svd(rows[list(I)], compute_uv=False)
        if s[-1] <= tol * s[0]:
            return False
    return True


def cartan_profile(f: ProjectiveCurve, rows: np.ndarray, r_grid: Sequence[float],
                   quad: QuadratureSpec = QuadratureSpec()) -> dict:
    """Columns of sum m_f(r, H_i) + N(W) <= T_f(r, O(n+1)) + S."""
    rows = np.asarray(rows, dtype=complex)
    if not general_position(rows):
        raise ValueError("hyperplanes are not in general position")
    if f.is_degenerate():
        raise ValueError("curve is linearly degenerate")
    targets = [SubschemeOnPn.hyperplane(a) for a in rows]
    wzeros = roots_with_multiplicity(f.wronskian) if f.wronskian.degree >= 1 else []
    cols = {f"m_{i + 1}": [] for i in range(len(rows))}
    cols.update({"N_W": [], "T": [], "LHS": [], "RHS": [], "excess": []})
    for r in r_grid:
        ms = [proximity(f, Z, r, quad)[0] for Z in targets]
        for i, v in enumerate(ms):
            cols[f"m_{i + 1}"].append(v)
        nw = counting_from_zeros(wzeros, r)
        T = characteristic(f, 1, r, quad)
        lhs = sum(ms) + nw
        rhs = (f.n + 1) * T
        cols["N_W"].append(nw)
        cols["T"].append(T)
        cols["LHS"].append(lhs)
        cols["RHS"].append(rhs)
        cols["excess"].append(lhs - rhs)
    return {k: np.asarray(v, dtype=float) for k, v in cols.items()}


def points_smt_profile(f: ProjectiveCurve, points: Sequence, r_grid: Sequence[float],
                       quad: QuadratureSpec = QuadratureSpec()) -> dict:
    """Columns of n sum m(P_i) + 2/(n+1) N(W) <= T(O(2)) + S and of
    sum m(P_i) + N(dd^c log h_0) <= S."""
    pts = [np.asarray([complex(c) for c in p]) for p in points]
    for i, j in combinations(range(len(pts)), 2):
        if np.linalg.matrix_rank(np.vstack([pts[i], pts[j]]), tol=1e-12) < 2:
            raise ValueError("repeated points")
    if f.is_degenerate():
        raise ValueError("curve is linearly degenerate")
    n = f.n
    targets = [SubschemeOnPn.point(p) for p in pts]
    wzeros = roots_with_multiplicity(f.wronskian) if f.wronskian.degree >= 1 else []
    cols = {f"m_P{i + 1}": [] for i in range(len(pts))}
    cols.update({"N_W": [], "N_ddc_log_h0": [], "T": [], "LHS_wronskian": [], "RHS_wronskian": [],
                 "excess_wronskian": [], "LHS_h0": []})
    for r in r_grid:
        ms = [proximity(f, Z, r, quad)[0] for Z in targets]
        for i, v in enumerate(ms):
            cols[f"m_P{i + 1}"].append(v)
        nw = counting_from_zeros(wzeros, r)
        nh = n_ddc_log_h0(f, r, quad)
        T = characteristic(f, 1, r, quad)
        lhs = n * sum(ms) + 2.0 / (n + 1) * nw
        rhs = 2 * T
        cols["N_W"].append(nw)
        cols["N_ddc_log_h0"].append(nh)
        cols["T"].append(T)
        cols["LHS_wronskian"].append(lhs)
        cols["RHS_wronskian"].append(rhs)
        cols["excess_wronskian"].append(lhs - rhs)
        cols["LHS_h0"].append(sum(ms) + nh)
    return {k: np.asarray(v, dtype=float) for k, v in cols.items()}


def defects(profile: dict, n_targets: int, prefix: str = "m_") -> np.ndarray:
    """delta_i = m_i / T at the largest radius."""
    T = profile["T"][-1]
    return np.array([profile[f"{prefix}{i + 1}"][-1] / T for i in range(n_targets)])
