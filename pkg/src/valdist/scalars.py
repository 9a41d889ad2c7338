"""Exact scalar helpers: Gaussian rationals and coefficient normalization."""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational


class QQi:
    """Gaussian rational re + im*i with Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _lift(x):
        if isinstance(x, QQi):
            return x
        if isinstance(x, (int, Fraction)):
            return QQi(x, 0)
        return None

    def __add__(self, other):
        o = QQi._lift(other)
        if o is None:
            return complex(self) + other
        return normalize(QQi(self.re + o.re, self.im + o.im))

    __radd__ = __add__

    def __sub__(self, other):
        o = QQi._lift(other)
        if o is None:
            return complex(self) - other
        return normalize(QQi(self.re - o.re, self.im - o.im))

    def __rsub__(self, other):
        o = QQi._lift(other)
        if o is None:
            return other - complex(self)
        return normalize(QQi(o.re - self.re, o.im - self.im))

    def __mul__(self, other):
        o = QQi._lift(other)
        if o is None:
            return complex(self) * other
        return normalize(QQi(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = QQi._lift(other)
        if o is None:
            return complex(self) / other
        den = o.re * o.re + o.im * o.im
        if den == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return normalize(QQi((self.re * o.re + self.im * o.im) / den, (self.im * o.re - self.re * o.im) / den))

    def __rtruediv__(self, other):
        o = QQi._lift(other)
        if o is None:
            return other / complex(self)
        return o / self

    def __neg__(self):
        return QQi(-self.re, -self.im)

    def __pow__(self, k: int):
        out = QQi(1)
        base = self
        if k < 0:
            base, k = QQi(1) / self, -k
        for _ in range(k):
            out = out * base
        return normalize(out) if isinstance(out, QQi) else out

    def __eq__(self, other):
        o = QQi._lift(other)
        if o is None:
            return complex(self) == other
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im)) if self.im else hash(self.re)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __abs__(self):
        return abs(complex(self))

    def conjugate(self):
        return QQi(self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"QQi({self.re}, {self.im})"


def normalize(c):
    """Collapse exact scalars to the simplest type (int < Fraction < QQi)."""
    if isinstance(c, QQi):
        if c.im == 0:
            c = c.re
        else:
            return c
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def is_exact(c) -> bool:
    return isinstance(c, (QQi, Rational))


def exact_div(a, b):
    """a / b staying exact for exact inputs."""
    if isinstance(a, QQi) or isinstance(b, QQi):
        return normalize(QQi._lift(a) / b) if QQi._lift(a) is not None else a / complex(b)
    if is_exact(a) and is_exact(b):
        return normalize(Fraction(a) / Fraction(b))
    return a / b


def parse_exact(value):
    """Parse [num, den] (rational) or [[n, d], [n, d]] (Gaussian rational)."""
    if isinstance(value, (int, Fraction)):
        return normalize(Fraction(value))
    if isinstance(value, str):
        return normalize(Fraction(value))
    if len(value) == 2 and all(isinstance(v, (list, tuple)) for v in value):
        return normalize(QQi(Fraction(*value[0]), Fraction(*value[1])))
    return normalize(Fraction(int(value[0]), int(value[1])))
