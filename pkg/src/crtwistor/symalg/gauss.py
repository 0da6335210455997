"""Exact rationals and Gaussian rationals.

``Rat`` is :class:`fractions.Fraction`.  ``GaussRat`` stores ``(a + b i) / d``
with integers ``a, b`` and a positive ``d`` in lowest terms, which keeps the
arithmetic on plain Python ints.
"""
from __future__ import annotations

import re
from fractions import Fraction
from math import gcd, isqrt

Rat = Fraction


def _norm(a: int, b: int, d: int) -> "GaussRat":
    if d < 0:
        a, b, d = -a, -b, -d
    g = gcd(gcd(a, b), d)
    if g > 1:
        a //= g
        b //= g
        d //= g
    obj = object.__new__(GaussRat)
    obj.a = a
    obj.b = b
    obj.d = d
    return obj


class GaussRat:
    __slots__ = ("a", "b", "d")

    def __new__(cls, re=0, im=0):
        if isinstance(re, GaussRat) and im == 0:
            return re
        if isinstance(re, str) and im == 0:
            return cls.parse(re)
        fr = Fraction(re)
        fi = Fraction(im)
        d = fr.denominator * fi.denominator // gcd(fr.denominator, fi.denominator)
        return _norm(fr.numerator * (d // fr.denominator), fi.numerator * (d // fi.denominator), d)

    @staticmethod
    def coerce(x) -> "GaussRat":
        if isinstance(x, GaussRat):
            return x
        if isinstance(x, int):
            return _norm(x, 0, 1)
        if isinstance(x, Fraction):
            return _norm(x.numerator, 0, x.denominator)
        if isinstance(x, complex):
            return GaussRat(Fraction(x.real), Fraction(x.imag))
        if isinstance(x, str):
            return GaussRat.parse(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to GaussRat")

    @property
    def re(self) -> Fraction:
        return Fraction(self.a, self.d)

    @property
    def im(self) -> Fraction:
        return Fraction(self.b, self.d)

    def conj(self) -> "GaussRat":
        return _norm(self.a, -self.b, self.d)

    def is_real(self) -> bool:
        return self.b == 0

    def norm2(self) -> Fraction:
        return Fraction(self.a * self.a + self.b * self.b, self.d * self.d)

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __eq__(self, other):
        try:
            o = GaussRat.coerce(other)
        except TypeError:
            return NotImplemented
        return self.a == o.a and self.b == o.b and self.d == o.d

    def __hash__(self):
        if self.b == 0:
            return hash(Fraction(self.a, self.d))
        return hash((self.a, self.b, self.d))

    def __neg__(self):
        return _norm(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __add__(self, other):
        try:
            o = GaussRat.coerce(other)
        except TypeError:
            return NotImplemented
        return _norm(self.a * o.d + o.a * self.d, self.b * o.d + o.b * self.d, self.d * o.d)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            o = GaussRat.coerce(other)
        except TypeError:
            return NotImplemented
        return _norm(self.a * o.d - o.a * self.d, self.b * o.d - o.b * self.d, self.d * o.d)

    def __rsub__(self, other):
        return GaussRat.coerce(other) - self

    def __mul__(self, other):
        try:
            o = GaussRat.coerce(other)
        except TypeError:
            return NotImplemented
        return _norm(self.a * o.a - self.b * o.b, self.a * o.b + self.b * o.a, self.d * o.d)

    __rmul__ = __mul__

    def inverse(self) -> "GaussRat":
        n = self.a * self.a + self.b * self.b
        if n == 0:
            raise ZeroDivisionError("GaussRat division by zero")
        # d / (a + bi) = d (a - bi) / (a^2 + b^2)
        return _norm(self.d * self.a, -self.d * self.b, n)

    def __truediv__(self, other):
        try:
            o = GaussRat.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return GaussRat.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def sqrt(self) -> "GaussRat":
        """Exact square root; raises ``ValueError`` if none exists in Q(i)."""
        if not self:
            return self
        # (x + yi)^2 = a/d + (b/d) i ; work with numerator a d + b d i over d^2
        A, B, D = self.a * self.d, self.b * self.d, self.d * self.d
        n2 = A * A + B * B
        n = isqrt(n2)
        if n * n != n2:
            raise ValueError(f"{self} has no square root in Q(i)")
        # x^2 = (n + A) / 2, y^2 = (n - A) / 2 over D
        xs, ys = n + A, n - A
        rd = isqrt(D)
        if rd * rd != D:
            raise ValueError(f"{self} has no square root in Q(i)")
        x = _sqrt_rat(Fraction(xs, 2))
        y = _sqrt_rat(Fraction(ys, 2))
        if B < 0:
            y = -y
        root = GaussRat(x, y) / rd
        if root * root != self:
            raise ValueError(f"{self} has no square root in Q(i)")
        return root

    def __repr__(self):
        return f"GaussRat({self})"

    def __str__(self):
        re_, im_ = self.re, self.im
        if im_ == 0:
            return str(re_)
        if re_ == 0:
            return _imag_str(im_)
        s = _imag_str(im_)
        return f"{re_}{s}" if s.startswith("-") else f"{re_}+{s}"

    @staticmethod
    def parse(text: str) -> "GaussRat":
        """Parse ``"3/4"``, ``"-i"``, ``"1/2-3/5i"`` and similar."""
        t = text.replace(" ", "")
        if not t:
            raise ValueError("empty number")
        m = _GAUSS_RE.fullmatch(t)
        if not m:
            raise ValueError(f"malformed Gaussian rational: {text!r}")
        re_part, im_part = m.group("re"), m.group("im")
        re_v = Fraction(re_part) if re_part else Fraction(0)
        if im_part is None:
            return GaussRat(re_v)
        if im_part in ("", "+"):
            im_v = Fraction(1)
        elif im_part == "-":
            im_v = Fraction(-1)
        else:
            im_v = Fraction(im_part)
        return GaussRat(re_v, im_v)


def _imag_str(v: Fraction) -> str:
    if v == 1:
        return "i"
    if v == -1:
        return "-i"
    return f"{v}i"


def _sqrt_rat(q: Fraction) -> Fraction:
    if q < 0:
        raise ValueError("negative")
    n, d = isqrt(q.numerator), isqrt(q.denominator)
    if n * n != q.numerator or d * d != q.denominator:
        raise ValueError(f"{q} is not a rational square")
    return Fraction(n, d)


_NUM = r"\d+(?:/\d+)?"
_GAUSS_RE = re.compile(
    rf"(?P<re>[+-]?{_NUM}(?![\d/]*i))?(?:(?P<im>[+-]?(?:{_NUM})?)i)?"
)

ZERO = _norm(0, 0, 1)
ONE = _norm(1, 0, 1)
I = _norm(0, 1, 1)
