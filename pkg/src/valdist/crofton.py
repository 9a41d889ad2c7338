"""Haar-random unitaries and Monte-Carlo Crofton averages.

Sample i of a HaarSampler is drawn from block i // BLOCK, whose stream is a Philox
generator keyed by (seed, dimension, stream, block). Any partition of the sample range into
contiguous batches therefore reproduces the same matrices, and block sums are reduced
in block order, so results do not depend on the thread count.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .curves import ProjectiveCurve

BLOCK = 4096


@dataclass(frozen=True)
class HaarSampler:
    dim: int
    seed: int = 0
    threads: int = 1
    stream: int = 0  # independent sample streams under one seed

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be >= 1")

    def _block(self, b: int) -> np.ndarray:
        ss = np.random.SeedSequence([int(self.seed), self.dim, int(self.stream), b])
        rng = np.random.Generator(np.random.Philox(ss))
        g = (rng.standard_normal((BLOCK, self.dim, self.dim))
             + 1j * rng.standard_normal((BLOCK, self.dim, self.dim))) / np.sqrt(2)
        q, r = np.linalg.qr(g)
        d = np.diagonal(r, axis1=-2, axis2=-1)
        phase = d / np.abs(d)
        return q * phase[:, None, :]

    def unitary(self, index: int) -> np.ndarray:
        return self._block(index // BLOCK)[index % BLOCK]

    def unitaries(self, start: int, count: int) -> np.ndarray:
        out = []
        i = start
        while i < start + count:
            b = i // BLOCK
            lo = i - b * BLOCK
            hi = min(BLOCK, start + count - b * BLOCK)
            out.append(self._block(b)[lo:hi])
            i = b * BLOCK + hi
        return np.concatenate(out) if out else np.zeros((0, self.dim, self.dim), dtype=complex)

    def reduce(self, samples: int, stat: Callable[[np.ndarray], np.ndarray]) -> tuple[float, float]:
        """Mean and standard error of stat(U) over the first `samples` unitaries."""
        nblocks = -(-samples // BLOCK)

        def work(b: int) -> tuple[float, float]:
            count = min(BLOCK, samples - b * BLOCK)
            v = np.asarray(stat(self._block(b)[:count]), dtype=float)
            return float(np.sum(v)), float(np.sum(v * v))

        if self.threads > 1:
            with ThreadPoolExecutor(self.threads) as ex:
                parts = list(ex.map(work, range(nblocks)))
        else:
            parts = [work(b) for b in range(nblocks)]
        s = sum(p[0] for p in parts)
        s2 = sum(p[1] for p in parts)
        mean = s / samples
        var = max(s2 / samples - mean * mean, 0.0) * samples / max(samples - 1, 1)
        return mean, float(np.sqrt(var / samples))


def haar_unitary(s: HaarSampler, index: int = 0) -> np.ndarray:
    return s.unitary(index)


def harmonic(n: int) -> float:
    return float(sum(1.0 / k for k in range(1, n + 1)))


def average_weil_hyperplane(n: int, x, samples: int, s: HaarSampler) -> tuple[float, float]:
    """Mean of -log |<a, g x>| / ||x|| over Haar g, with a = e_0 (first row of g)."""
    x = np.asarray(x, dtype=complex)
    if x.shape != (n + 1,) or s.dim != n + 1:
        raise ValueError("dimension mismatch")
    nx = np.linalg.norm(x)
    if nx == 0:
        raise ValueError("zero point")
    u = x / nx
    return s.reduce(samples, lambda U: -np.log(np.abs(U[:, 0, :] @ u)))


def average_subsystem_base_locus(n: int, k: int, x, samples: int, s: HaarSampler) -> tuple[float, float]:
    """Mean of -log max_{i<=k} |<a_i, x/||x||>| with a_i the first k+1 rows of g."""
    if not 0 <= k <= n - 1 and not (n == 0 and k == 0):
        raise ValueError("k must lie in 0..n-1")
    x = np.asarray(x, dtype=complex)
    if x.shape != (n + 1,) or s.dim != n + 1:
        raise ValueError("dimension mismatch")
    u = x / np.linalg.norm(x)
    return s.reduce(samples, lambda U: -np.log(np.max(np.abs(U[:, : k + 1, :] @ u), axis=1)))


def _log_abs_circle_mean(P: np.ndarray, r: float) -> np.ndarray:
    """Jensen: circle mean of log|p(r e^{it})| for rows of ascending coefficients P."""
    S, L = P.shape
    out = np.empty(S)
    deg = np.full(S, L - 1)
    scale = np.max(np.abs(P), axis=1)
    for j in range(L - 1, -1, -1):
        small = (deg == j) & (np.abs(P[:, j]) <= 1e-14 * scale)
        deg[small] -= 1
    for d in np.unique(deg):
        rows = np.where(deg == d)[0]
        lead = P[rows, d]
        val = np.log(np.abs(lead))
        if d >= 1:
            C = P[rows, : d + 1] / lead[:, None]
            comp = np.zeros((len(rows), d, d), dtype=complex)
            comp[:, 1:, :-1] = np.eye(d - 1)
            comp[:, :, -1] = -C[:, :d]
            roots = np.linalg.eigvals(comp)
            val = val + np.sum(np.log(np.maximum(r, np.abs(roots))), axis=1)
        out[rows] = val
    return out


def average_proximity(f: ProjectiveCurve, r: float, samples: int, s: HaarSampler) -> tuple[float, float]:
    """Mean of m_f(r, g*H) over Haar g with H = {x_0 = 0}.

    Each sample is m_f(r, g*H) = avg log||F|| - avg log|a_g . F| on |z| = r with the
    second average in closed form (Jensen) from the roots of a_g . F.
    """
    if f.is_degenerate():
        raise ValueError("curve lies in a hyperplane")
    if s.dim != f.n + 1:
        raise ValueError("dimension mismatch")
    from .nevanlinna import log_norm_average

    lognorm, _ = log_norm_average(f, r)
    e = f.degree
    C = np.zeros((f.n + 1, e + 1), dtype=complex)
    for j, p in enumerate(f.components):
        C[j, : len(p.coeffs)] = p.to_numpy()
    return s.reduce(samples, lambda U: lognorm - _log_abs_circle_mean(U[:, 0, :] @ C, r))
