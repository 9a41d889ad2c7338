"""Seeded test corpora: random rational curves, normal-form curves, targets in general position."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .curves import ProjectiveCurve, reduce_representation
from .nevanlinna import general_position
from .poly import CPoly, poly_gcd
from .scalars import QQi, normalize


def corpus_rng(seed: int, *tags: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), *tags])))


def gaussian_rational(rng: np.random.Generator, radius: float, den: int = 8):
    """Random Gaussian rational (p + qi)/den with modulus at most radius."""
    lim = int(radius * den)
    while True:
        p, q = (int(v) for v in rng.integers(-lim, lim + 1, size=2))
        if p * p + q * q <= (radius * den) ** 2:
            return normalize(QQi(Fraction(p, den), Fraction(q, den)))


def _coprime(comps) -> bool:
    g = comps[0]
    for p in comps[1:]:
        g = poly_gcd(g, p)
        if g.degree == 0:
            return True
    return g.degree == 0


def random_rational_curve(rng: np.random.Generator, n: int, degree: int, root_radius: float = 0.5,
                          max_tries: int = 100) -> ProjectiveCurve:
    """n+1 exact components of equal degree with Gaussian-rational roots in |a| <= root_radius.

    Resamples until the representation is reduced and the curve is linearly non-degenerate
    (needs degree >= n).
    """
    if degree < n:
        raise ValueError("a non-degenerate curve in P^n needs degree >= n")
    for _ in range(max_tries):
        comps = []
        for _ in range(n + 1):
            lead = normalize(QQi(int(rng.integers(1, 4)), int(rng.integers(-2, 3))))
            roots = [gaussian_rational(rng, root_radius) for _ in range(degree)]
            comps.append(CPoly.from_roots(roots, lead))
        if not _coprime(comps):
            continue
        f = ProjectiveCurve(comps)
        if not f.is_degenerate():
            return f
    raise RuntimeError("could not draw a non-degenerate reduced curve")


def random_corpus(seed: int, count: int, n_choices=(1, 2), max_degree: int = 5, root_radius: float = 0.5,
                  tag: int = 0) -> list[ProjectiveCurve]:
    rng = corpus_rng(seed, 101, tag)
    out = []
    for _ in range(count):
        n = int(rng.choice(n_choices))
        e = int(rng.integers(n, max_degree + 1))
        out.append(random_rational_curve(rng, n, max(e, 1), root_radius))
    return out


@dataclass(frozen=True)
class NormalFormCurve:
    curve: ProjectiveCurve
    point: object
    nu: tuple

    @property
    def expected_orders(self) -> tuple:
        """ord F^k = k nu_1 + (k-1) nu_2 + ... + nu_k."""
        n = len(self.nu)
        return tuple(sum((k - i) * self.nu[i] for i in range(k)) for k in range(1, n + 1))


def normal_form_curve(rng: np.random.Generator, nu, point=0, tail: int = 2) -> NormalFormCurve:
    """Curve with stationarity indices nu at `point`.

    Start from f_j = (z-p)^{b_j} u_j(z - p), b_j = sum_{i<=j} (nu_i + 1), u_j(0) != 0,
    then mix components with a random invertible integer matrix.
    """
    nu = tuple(int(v) for v in nu)
    n = len(nu)
    b = [0]
    for v in nu:
        b.append(b[-1] + v + 1)
    shift = CPoly([-point, 1]) if point != 0 else CPoly([0, 1])
    comps = []
    for j in range(n + 1):
        u = [int(rng.integers(1, 4))] + [int(rng.integers(-3, 4)) for _ in range(tail)]
        comps.append(CPoly.monomial(b[j]).compose(shift) * CPoly(u).compose(shift))
    while True:
        A = rng.integers(-2, 3, size=(n + 1, n + 1))
        if round(abs(np.linalg.det(A))) != 0:
            break
    mixed = []
    for row in A:
        acc = CPoly()
        for c, p in zip(row, comps):
            if c:
                acc = acc + p * int(c)
        mixed.append(acc)
    return NormalFormCurve(reduce_representation(mixed), point, nu)


def normal_form_corpus(seed: int, count: int, max_n: int = 3, max_nu: int = 2) -> list[NormalFormCurve]:
    rng = corpus_rng(seed, 202)
    out = []
    for _ in range(count):
        n = int(rng.integers(1, max_n + 1))
        nu = tuple(int(v) for v in rng.integers(0, max_nu + 1, size=n))
        point = gaussian_rational(rng, 1.0, den=4) if rng.random() < 0.5 else 0
        out.append(normal_form_curve(rng, nu, point))
    return out


def general_position_hyperplanes(rng: np.random.Generator, n: int, q: int, max_tries: int = 100) -> np.ndarray:
    """q random Gaussian-integer hyperplane vectors in C^{n+1}, in general position."""
    for _ in range(max_tries):
        rows = rng.integers(-3, 4, size=(q, n + 1)) + 1j * rng.integers(-3, 4, size=(q, n + 1))
        if np.all(np.abs(rows).sum(axis=1) > 0) and general_position(rows):
            return rows
    raise RuntimeError("could not draw hyperplanes in general position")


def random_points(rng: np.random.Generator, n: int, q: int) -> np.ndarray:
    while True:
        pts = rng.integers(-3, 4, size=(q, n + 1)) + 1j * rng.integers(-3, 4, size=(q, n + 1))
        if _distinct(pts):
            return pts


def _distinct(pts: np.ndarray) -> bool:
    for i in range(len(pts)):
        if not np.abs(pts[i]).sum():
            return False
        for j in range(i):
            if np.linalg.matrix_rank(np.vstack([pts[i], pts[j]]), tol=1e-12) < 2:
                return False
    return True
