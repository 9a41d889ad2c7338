"""Circle averages and log-weighted disk integrals.

circle_average: composite Gauss-Legendre with adaptive bisection.
log_weighted_disk_integrals: (1/pi) * int_{|z|<R} psi(z) log(R/|z|) dA for a whole grid of R,
built from annulus moments; integrable point singularities of psi are cut out by small
disks integrated in local polar coordinates with a geometric radial mesh and a fitted
power-law tail.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

TWO_PI = 2.0 * np.pi


class NonIntegrableError(ValueError):
    """Density is not integrable near a singular point."""


@lru_cache(maxsize=None)
def gauss_legendre(q: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights on [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(q)
    return (x + 1) / 2, w / 2


@dataclass(frozen=True)
class QuadratureSpec:
    nodes: int = 64
    panels: int = 32
    tol: float = 1e-10  # absolute error allowed per unit of normalized arc length
    singular_cap: float = 20.0  # refine panels where the integrand exceeds this
    max_depth: int = 20
    max_active: int = 1 << 14  # refinement that keeps this many panels active is diverging


@dataclass(frozen=True)
class DiskQuadratureSpec:
    radial_nodes: int = 16
    angular_nodes: int = 16
    angular_panels: int = 8
    local_bins: int = 30
    local_nodes: int = 8
    local_angles: int = 32
    grading_levels: int = 24


def circle_average(func: Callable[[np.ndarray], np.ndarray], spec: QuadratureSpec = QuadratureSpec(),
                   cap: bool = True) -> tuple[float, float]:
    """(1/2pi) int_0^{2pi} func(theta) dtheta and an absolute error estimate.

    func receives a 1-D array of angles and returns real values (+inf allowed at
    isolated points).
    """
    x, w = gauss_legendre(spec.nodes)
    edges = np.linspace(0.0, TWO_PI, spec.panels + 1)
    a = edges[:-1]
    b = edges[1:]
    depth = 0
    total = 0.0
    err = 0.0
    while a.size:
        if a.size > spec.max_active:
            raise NonIntegrableError("circle quadrature refinement does not localize")
        h = b - a
        mid = (a + b) / 2
        # coarse panel and its two halves in one call
        th = np.concatenate([
            (a[:, None] + h[:, None] * x).ravel(),
            (a[:, None] + (h / 2)[:, None] * x).ravel(),
            (mid[:, None] + (h / 2)[:, None] * x).ravel(),
        ])
        vals = np.asarray(func(th), dtype=float).reshape(3, a.size, -1)
        finite = np.isfinite(vals)
        bad = ~finite.all(axis=(0, 2))
        if depth >= spec.max_depth and bad.any():
            fill = np.where(finite, vals, -np.inf).max(axis=(0, 2))
            vals = np.where(finite, vals, fill[None, :, None])
        coarse = h * (vals[0] @ w)
        fine = h / 2 * (vals[1] @ w + vals[2] @ w)
        est = np.abs(coarse - fine)
        ok = est <= spec.tol * h
        if cap:
            ok &= vals.max(axis=(0, 2)) <= spec.singular_cap
        ok &= ~bad
        if depth >= spec.max_depth:
            ok[:] = True
        total += float(np.sum(fine[ok]))
        err += float(np.sum(est[ok]))
        a, b = a[~ok], b[~ok]
        if a.size:
            m = (a + b) / 2
            a, b = np.concatenate([a, m]), np.concatenate([m, b])
        depth += 1
    return total / TWO_PI, err / TWO_PI


def circle_mean_fixed(func: Callable[[np.ndarray], np.ndarray], nodes: int = 64, panels: int = 32) -> float:
    """Non-adaptive composite Gauss-Legendre circle mean (smooth integrands)."""
    x, w = gauss_legendre(nodes)
    edges = np.linspace(0.0, TWO_PI, panels + 1)
    h = edges[1] - edges[0]
    th = (edges[:-1, None] + h * x).ravel()
    vals = np.asarray(func(th), dtype=float).reshape(panels, nodes)
    return float(h * np.sum(vals @ w) / TWO_PI)


# ---------------------------------------------------------------- disk integrals

def _smoothstep_nodes(a: np.ndarray, b: np.ndarray, q: int) -> tuple[np.ndarray, np.ndarray]:
    """Composite nodes on panels [a, b] through u = 3s^2 - 2s^3 (tames endpoint kinks)."""
    s, w = gauss_legendre(q)
    u = 3 * s**2 - 2 * s**3
    du = 6 * s * (1 - s)
    h = (b - a)[:, None]
    pts = a[:, None] + h * u
    wts = h * du * w
    return pts.ravel(), wts.ravel()


def _wrap(t: np.ndarray) -> np.ndarray:
    return np.mod(t, TWO_PI)


@dataclass
class _Center:
    point: complex
    radius: float
    inside: bool  # local disk lies in the integration domain


def _centers(points: Sequence[complex], grid: np.ndarray) -> list[_Center]:
    pts = [0j] + [complex(p) for p in points if abs(p) > 0]
    # drop duplicates (numerically equal roots)
    uniq: list[complex] = []
    for p in pts:
        if all(abs(p - q) > 1e-12 * (1 + abs(p)) for q in uniq):
            uniq.append(p)
    rmax = grid[-1]
    out = []
    for i, p in enumerate(uniq):
        others = [abs(p - q) for j, q in enumerate(uniq) if j != i]
        gaps = [abs(abs(p) - R) for R in grid]
        if abs(p) > 0:
            gaps.append(abs(p))
        d = min(others + gaps + [0.5 * (1 + abs(p))])
        rad = 0.45 * d
        if rad <= 0:
            raise ValueError("singular point lies on an integration circle")
        out.append(_Center(p, rad, abs(p) < rmax))
    return out


def _local_disk(psi, c: _Center, spec: DiskQuadratureSpec) -> tuple[float, float]:
    """(M0, M1) over B(c, radius): (1/pi) int psi dA and (1/pi) int psi log|z| dA."""
    J = spec.local_bins
    s, w = gauss_legendre(spec.local_nodes)
    lo = c.radius * 2.0 ** -(np.arange(J) + 1.0)
    hi = 2 * lo
    t = lo[:, None] + (hi - lo)[:, None] * s  # (J, q)
    wt = (hi - lo)[:, None] * w
    alpha = TWO_PI * np.arange(spec.local_angles) / spec.local_angles
    z = c.point + t[..., None] * np.exp(1j * alpha)  # (J, q, A)
    vals = np.asarray(psi(z.ravel()), dtype=float).reshape(z.shape)
    if not np.all(np.isfinite(vals)):
        raise NonIntegrableError("density is not finite near a singular point")
    ang0 = vals.mean(axis=-1) * TWO_PI  # int d alpha
    ang1 = (vals * np.log(np.abs(z))).mean(axis=-1) * TWO_PI
    G0 = np.sum(ang0 * t * wt, axis=1) / np.pi  # per bin
    G1 = np.sum(ang1 * t * wt, axis=1) / np.pi
    m0 = float(G0.sum())
    m1 = float(G1.sum())
    g_last, g_prev = G0[-1], G0[-2]
    scale = max(abs(m0), 1e-300)
    if g_prev > 0 and g_last > 1e-15 * scale:
        ratio = g_prev / g_last
        if ratio <= 1.0 + 1e-3:
            raise NonIntegrableError("density not integrable at a singular point")
        p = np.log2(ratio)  # beta + 1
        qf = 2.0 ** -p
        tail0 = g_last * qf / (1 - qf)
        t0 = lo[-1]
        if abs(c.point) > 0:
            tail1 = tail0 * np.log(abs(c.point))
        else:
            tail1 = tail0 * (np.log(t0) - 1.0 / p)
        m0 += tail0
        m1 += tail1
    return m0, m1


def _annulus(psi, lo: float, hi: float, centers: list[_Center], spec: DiskQuadratureSpec) -> tuple[float, float]:
    """(M0, M1) over {lo <= |z| <= hi} minus the disks of centers."""
    if hi <= lo:
        return 0.0, 0.0
    brk = {lo, hi}
    for c in centers:
        m = abs(c.point)
        for j in range(spec.grading_levels):
            d = c.radius * 2.0**j
            for v in (m - d, m + d):
                if lo < v < hi:
                    brk.add(v)
            if d > hi - lo:
                break
        for v in (m, m - c.radius / 2, m + c.radius / 2):
            if lo < v < hi:
                brk.add(v)
    edges = [lo]
    for v in sorted(brk)[1:]:
        # keep every panel within a factor 2 in radius
        while v > 2 * edges[-1] and edges[-1] > 0:
            edges.append(2 * edges[-1])
        edges.append(v)
    edges = np.array(edges)
    rho, wr = _smoothstep_nodes(edges[:-1], edges[1:], spec.radial_nodes)

    base = np.linspace(0.0, TWO_PI, spec.angular_panels + 1)
    all_th = []
    all_w = []
    all_rho = []
    for r, wgt in zip(rho, wr):
        angs = list(base)
        arcs = []
        for c in centers:
            m = abs(c.point)
            if m == 0:
                continue
            th0 = np.angle(c.point)
            dist = abs(r - m)
            if dist < c.radius:
                cosv = (r * r + m * m - c.radius**2) / (2 * r * m)
                half = float(np.arccos(np.clip(cosv, -1.0, 1.0)))
                arcs.append((th0, half))
                angs.extend([th0 - half, th0 + half])
            scale = max(c.radius, dist) / r
            for j in range(spec.grading_levels):
                d = scale * 2.0**j
                if d >= np.pi:
                    break
                angs.extend([th0 - d, th0 + d])
        angs = np.unique(np.concatenate([_wrap(np.array(angs[len(base):])), base]))
        a, b = angs[:-1], angs[1:]
        keep = b - a > 1e-15
        a, b = a[keep], b[keep]
        if arcs:
            mid = (a + b) / 2
            excl = np.zeros(a.shape, dtype=bool)
            for th0, half in arcs:
                delta = np.abs(np.angle(np.exp(1j * (mid - th0))))
                excl |= delta < half
            a, b = a[~excl], b[~excl]
        th, wt = _smoothstep_nodes(a, b, spec.angular_nodes)
        all_th.append(th)
        all_w.append(wt * wgt)
        all_rho.append(np.full(th.shape, r))
    th = np.concatenate(all_th)
    wt = np.concatenate(all_w)
    rr = np.concatenate(all_rho)
    vals = np.asarray(psi(rr * np.exp(1j * th)), dtype=float)
    base_w = wt * rr * vals / np.pi
    return float(np.sum(base_w)), float(np.sum(base_w * np.log(rr)))


def log_weighted_disk_integrals(psi: Callable[[np.ndarray], np.ndarray], radii: Sequence[float],
                                singular_points: Sequence[complex] = (),
                                spec: DiskQuadratureSpec = DiskQuadratureSpec()) -> np.ndarray:
    """N(psi dd^c|z|^2, R) = (1/pi) int_{|z|<R} psi log(R/|z|) dA for every R in radii.

    Uses N(R) = log(R) M0(R) - M1(R) with M0 = (1/pi) int psi dA and
    M1 = (1/pi) int psi log|z| dA accumulated annulus by annulus.
    """
    radii = np.asarray(radii, dtype=float)
    order = np.argsort(radii)
    grid = radii[order]
    if grid[0] <= 0 or np.any(np.diff(grid) <= 0):
        raise ValueError("radii must be positive and distinct")
    centers = _centers(singular_points, grid)
    origin = centers[0]
    M0 = np.zeros(len(grid))
    M1 = np.zeros(len(grid))
    acc0, acc1 = _local_disk(psi, origin, spec)
    prev = origin.radius
    for i, R in enumerate(grid):
        g0, g1 = _annulus(psi, prev, R, centers, spec)
        acc0 += g0
        acc1 += g1
        for c in centers[1:]:
            if c.inside and (i == 0 or abs(c.point) > grid[i - 1]) and abs(c.point) < R:
                l0, l1 = _local_disk(psi, c, spec)
                acc0 += l0
                acc1 += l1
        M0[i], M1[i] = acc0, acc1
        prev = R
    out = np.log(grid) * M0 - M1
    result = np.empty_like(out)
    result[order] = out
    return result
