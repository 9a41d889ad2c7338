"""Exterior algebra on C^{N+1} in the basis e_I of sorted index subsets.

Pairing convention: (b_1 ^ ... ^ b_m)(v_1 ^ ... ^ v_m) = det[b_i(v_j)], so e_I*(e_J) = [I == J].
Interior product: gamma(alpha _| beta) = (beta ^ gamma)(alpha) for every test covector gamma.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

import numpy as np


@lru_cache(maxsize=None)
def subsets(ambient: int, size: int) -> tuple:
    return tuple(combinations(range(ambient), size))


def merge_sign(a: tuple, b: tuple) -> int:
    """Sign of the permutation sorting a + b (0 when a and b intersect)."""
    if set(a) & set(b):
        return 0
    inv = sum(1 for x in a for y in b if x > y)
    return -1 if inv % 2 else 1


@dataclass(frozen=True)
class ExteriorVector:
    ambient: int
    level: int
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 0 <= self.level <= self.ambient:
            raise ValueError("level out of range")
        for key in self.coeffs:
            if len(key) != self.level or list(key) != sorted(set(key)) or (key and key[-1] >= self.ambient):
                raise ValueError(f"bad index subset {key}")

    @classmethod
    def basis(cls, ambient: int, idx: tuple) -> "ExteriorVector":
        return cls(ambient, len(idx), {tuple(idx): 1.0})

    @classmethod
    def from_vector(cls, v) -> "ExteriorVector":
        v = np.asarray(v, dtype=complex)
        return cls(len(v), 1, {(i,): complex(c) for i, c in enumerate(v) if c != 0})

    def get(self, idx) -> complex:
        return self.coeffs.get(tuple(idx), 0.0)

    def as_array(self) -> np.ndarray:
        return np.array([self.get(I) for I in subsets(self.ambient, self.level)], dtype=complex)

    def norm2(self) -> float:
        return float(sum(abs(c) ** 2 for c in self.coeffs.values()))

    def wedge(self, other: "ExteriorVector") -> "ExteriorVector":
        if self.ambient != other.ambient:
            raise ValueError("ambient mismatch")
        return type(self)(self.ambient, self.level + other.level, _wedge(self.coeffs, other.coeffs))

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) + c
        return type(self)(self.ambient, self.level, out)

    def scale(self, c) -> "ExteriorVector":
        return type(self)(self.ambient, self.level, {k: v * c for k, v in self.coeffs.items()})


class ExteriorCovector(ExteriorVector):
    """Same storage; acts on ExteriorVectors of equal level through the pairing."""

    def __call__(self, v: ExteriorVector):
        if v.level != self.level or v.ambient != self.ambient:
            raise ValueError("pairing level mismatch")
        return sum(c * v.get(k) for k, c in self.coeffs.items())

    @classmethod
    def from_vector(cls, v) -> "ExteriorCovector":
        v = np.asarray(v, dtype=complex)
        return cls(len(v), 1, {(i,): complex(c) for i, c in enumerate(v) if c != 0})


def _wedge(a: dict, b: dict) -> dict:
    out: dict = {}
    for I, x in a.items():
        for J, y in b.items():
            s = merge_sign(I, J)
            if s:
                K = tuple(sorted(I + J))
                out[K] = out.get(K, 0) + s * x * y
    return out


def wedge_vectors(vectors) -> ExteriorVector:
    out = ExteriorVector(len(vectors[0]), 0, {(): 1.0})
    for v in vectors:
        out = out.wedge(ExteriorVector.from_vector(v))
    return out


@lru_cache(maxsize=None)
def contraction_pattern(ambient: int, p_level: int, q_level: int) -> tuple:
    """Entries (K, I, J, sign) with (alpha _| beta)_K = sum sign * beta_I * alpha_J, J = I u K."""
    out = []
    for K in subsets(ambient, p_level - q_level):
        for I in subsets(ambient, q_level):
            s = merge_sign(I, K)
            if s:
                out.append((K, I, tuple(sorted(I + K)), s))
    return tuple(out)


def interior_product(alpha: ExteriorVector, beta: ExteriorCovector):
    """alpha _| beta; a scalar when the levels agree."""
    if alpha.ambient != beta.ambient:
        raise ValueError("ambient mismatch")
    if beta.level > alpha.level:
        raise ValueError("covector level exceeds vector level")
    if beta.level == alpha.level:
        return beta(alpha)
    out: dict = {}
    for K, I, J, s in contraction_pattern(alpha.ambient, alpha.level, beta.level):
        b = beta.coeffs.get(I)
        a = alpha.coeffs.get(J)
        if b is not None and a is not None:
            out[K] = out.get(K, 0) + s * b * a
    return ExteriorVector(alpha.ambient, alpha.level - beta.level, out)


def contraction_matrix(beta: ExteriorCovector, p_level: int) -> np.ndarray:
    """Matrix C with (alpha _| beta) = C @ alpha for alpha of level p_level (array form)."""
    amb = beta.ambient
    rows = {K: i for i, K in enumerate(subsets(amb, p_level - beta.level))}
    cols = {J: j for j, J in enumerate(subsets(amb, p_level))}
    C = np.zeros((len(rows), len(cols)), dtype=complex)
    for K, I, J, s in contraction_pattern(amb, p_level, beta.level):
        b = beta.coeffs.get(I)
        if b is not None:
            C[rows[K], cols[J]] += s * b
    return C
