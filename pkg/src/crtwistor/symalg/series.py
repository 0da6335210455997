"""Truncated power series in one distinguished variable.

Coefficients are :class:`MPoly` objects over a fixed set of base variables
(Laurent monomials are allowed). A series of order ``N`` is known exactly
through ``t**N``; ``order = math.inf`` marks an exact (finite) expression.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping, Sequence

from ..errors import NotAUnitError
from .gauss import GaussRat
from .mpoly import MPoly

INF = math.inf


class TSeries:
    __slots__ = ("var", "base", "order", "coeffs")

    def __init__(self, var: str, base: Sequence[str], coeffs: Mapping[int, object] | None = None, order=INF):
        self.var = var
        self.base = tuple(base)
        self.order = order
        out = {}
        for k, c in (coeffs or {}).items():
            if k > order:
                continue
            c = c.extend(self.base) if isinstance(c, MPoly) else MPoly.const(self.base, c)
            if c:
                out[k] = c
        self.coeffs = out

    @classmethod
    def _raw(cls, var, base, coeffs, order):
        obj = object.__new__(cls)
        obj.var, obj.base, obj.order, obj.coeffs = var, base, order, coeffs
        return obj

    # ------------------------------------------------------------- builders
    @classmethod
    def const(cls, var, base, c, order=INF) -> "TSeries":
        return cls(var, base, {0: c}, order)

    @classmethod
    def gen(cls, var, base, order=INF) -> "TSeries":
        return cls(var, base, {1: 1}, order)

    @classmethod
    def basevar(cls, var, base, name, order=INF) -> "TSeries":
        return cls(var, base, {0: MPoly.var(base, name)}, order)

    def like(self, c) -> "TSeries":
        """A constant (or base polynomial) in the same ring, exact."""
        return TSeries(self.var, self.base, {0: c})

    # ------------------------------------------------------------ inspection
    def coeff(self, k: int) -> MPoly:
        if k > self.order:
            raise ValueError(f"coefficient {k} beyond known order {self.order}")
        return self.coeffs.get(k, MPoly.zero(self.base))

    def valuation(self):
        """Lowest known nonzero power, or ``order + 1`` if nothing is known."""
        return min(self.coeffs) if self.coeffs else self.order + 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def truncate(self, n) -> "TSeries":
        n = min(n, self.order)
        return TSeries._raw(self.var, self.base, {k: c for k, c in self.coeffs.items() if k <= n}, n)

    def items(self):
        return sorted(self.coeffs.items())

    # ----------------------------------------------------------- arithmetic
    def _coerce(self, other) -> "TSeries":
        if isinstance(other, TSeries):
            if other.var != self.var or other.base != self.base:
                raise ValueError("series over different rings")
            return other
        return self.like(other)

    def __eq__(self, other):
        if isinstance(other, (TSeries, int, Fraction, GaussRat, MPoly)):
            o = self._coerce(other)
            return self.order == o.order and self.coeffs == o.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.order, frozenset(self.coeffs.items())))

    def __neg__(self):
        return TSeries._raw(self.var, self.base, {k: -c for k, c in self.coeffs.items()}, self.order)

    def _addsub(self, other, sign):
        o = self._coerce(other)
        n = min(self.order, o.order)
        out = {k: c for k, c in self.coeffs.items() if k <= n}
        for k, c in o.coeffs.items():
            if k > n:
                continue
            s = out[k] + c if sign > 0 and k in out else (out[k] - c if k in out else (c if sign > 0 else -c))
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return TSeries._raw(self.var, self.base, out, n)

    def __add__(self, other):
        return self._addsub(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._addsub(other, -1)

    def __rsub__(self, other):
        return (-self)._addsub(other, 1)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussRat)):
            if not other:
                return TSeries._raw(self.var, self.base, {}, self.order)
            return TSeries._raw(self.var, self.base, {k: c.scale(other) for k, c in self.coeffs.items()}, self.order)
        o = self._coerce(other)
        n = min(self.order + o.valuation(), o.order + self.valuation())
        out: dict = {}
        for i, a in self.coeffs.items():
            for j, b in o.coeffs.items():
                if i + j > n:
                    continue
                p = a * b
                if i + j in out:
                    p = out[i + j] + p
                out[i + j] = p
        return TSeries._raw(self.var, self.base, {k: c for k, c in out.items() if c}, n)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "TSeries":
        if n < 0:
            return self.inverse() ** (-n)
        out = self.like(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def inverse(self) -> "TSeries":
        """Multiplicative inverse; the leading coefficient must be a unit."""
        if not self.coeffs:
            raise NotAUnitError("series has no known nonzero coefficient")
        v = min(self.coeffs)
        lead = self.coeffs[v]
        if not lead.is_unit():
            raise NotAUnitError(f"leading coefficient {lead} is not a unit")
        li = lead.unit_inverse()
        n = self.order - 2 * v
        # u = self / (lead t^v) - 1, known through t^(order - v)
        m = self.order - v
        u = {k - v: c * li for k, c in self.coeffs.items() if k != v}
        out = {0: MPoly.const(self.base, 1)}
        if m == INF and u:
            raise NotAUnitError("exact series with several terms has an infinite inverse; truncate first")
        depth = 0 if m == INF else m
        for k in range(1, int(depth) + 1):
            acc = MPoly.zero(self.base)
            for j, c in u.items():
                if j <= k and k - j in out:
                    acc = acc + c * out[k - j]
            if acc:
                out[k] = -acc
        return TSeries._raw(
            self.var, self.base, {k - v: c * li for k, c in out.items() if k - v <= n and c}, n
        )

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, GaussRat)):
            return self * GaussRat.coerce(other).inverse()
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def sqrt(self) -> "TSeries":
        """Square root with the leading coefficient's principal branch."""
        if not self.coeffs:
            raise NotAUnitError("cannot take the square root of an unknown series")
        v = min(self.coeffs)
        if v % 2:
            raise ValueError("odd leading power")
        lead = self.coeffs[v]
        if len(lead) != 1:
            raise NotAUnitError("leading coefficient is not a monomial")
        (e, c), = lead.terms()
        if any(k % 2 for k in e):
            raise ValueError("leading monomial is not a square")
        r = MPoly.monomial(self.base, tuple(k // 2 for k in e), c.sqrt())
        j = v // 2
        n = self.order - j
        m = self.order - v
        if m == INF and len(self.coeffs) > 1:
            raise NotAUnitError("truncate before taking square roots")
        li = lead.unit_inverse()
        u = {k - v: c * li for k, c in self.coeffs.items() if k != v}
        # (1 + u)^(1/2) by the recursion 2 s_k = u_k - sum_{0<i<k} s_i s_{k-i}
        s = {0: MPoly.const(self.base, 1)}
        top = 0 if m == INF else int(m)
        for k in range(1, top + 1):
            acc = u.get(k, MPoly.zero(self.base))
            for i in range(1, k):
                if i in s and k - i in s:
                    acc = acc - s[i] * s[k - i]
            if acc:
                s[k] = acc.scale(Fraction(1, 2))
        return TSeries._raw(self.var, self.base, {k + j: c * r for k, c in s.items() if k + j <= n and c}, n)

    def conj(self) -> "TSeries":
        return TSeries._raw(self.var, self.base, {k: c.conj() for k, c in self.coeffs.items()}, self.order)

    # -------------------------------------------------------------- calculus
    def diff(self, name: str) -> "TSeries":
        if name == self.var:
            out = {k - 1: c.scale(k) for k, c in self.coeffs.items() if k}
            return TSeries._raw(self.var, self.base, out, self.order - 1)
        out = {}
        for k, c in self.coeffs.items():
            d = c.diff(name)
            if d:
                out[k] = d
        return TSeries._raw(self.var, self.base, out, self.order)

    def map_coeffs(self, fn) -> "TSeries":
        return TSeries(self.var, self.base, {k: fn(c) for k, c in self.coeffs.items()}, self.order)

    def at(self, value=1) -> MPoly:
        """Sum of the known coefficients at ``var = value``."""
        out = MPoly.zero(self.base)
        for k, c in self.coeffs.items():
            out = out + c.scale(GaussRat.coerce(value) ** k)
        return out

    def compose(self, g: "TSeries") -> "TSeries":
        """``self(g)`` for ``g`` with positive valuation."""
        g = self._coerce(g)
        vg = g.valuation()
        if vg < 1:
            raise ValueError("inner series must vanish at the origin")
        if any(k < 0 for k in self.coeffs):
            raise ValueError("outer series must be a power series")
        ks = [k for k in self.coeffs if k >= 1]
        n = INF
        if self.order != INF:
            n = vg * (self.order + 1) - 1
        if ks and g.order != INF:
            n = min(n, g.order + (min(ks) - 1) * vg)
        top = max(self.coeffs, default=0)
        acc = self.like(self.coeff(top) if self.coeffs else 0)
        for k in range(top - 1, -1, -1):
            acc = (acc * g + self.coeffs.get(k, MPoly.zero(self.base))).truncate(n)
        return acc.truncate(n)

    def revert(self) -> "TSeries":
        """Compositional inverse of ``c1 t + c2 t^2 + ...`` with ``c1`` a unit."""
        if self.valuation() != 1 or self.coeffs.get(0):
            raise ValueError("series must start at the linear term")
        c1 = self.coeffs[1]
        if not c1.is_unit():
            raise NotAUnitError("linear coefficient is not a unit")
        inv = c1.unit_inverse()
        n = self.order
        if n == INF:
            raise ValueError("revert needs a truncated series")
        t = TSeries.gen(self.var, self.base, n)
        h = t * inv
        for _ in range(int(n)):
            h = (h - (self.compose(h) - t) * inv).truncate(n)
        return h

    def __repr__(self):
        return f"TSeries({self})"

    def __str__(self):
        parts = [f"({c})*{self.var}^{k}" for k, c in self.items()]
        tail = "" if self.order == INF else f" + O({self.var}^{self.order + 1})"
        return (" + ".join(parts) or "0") + tail


def expand(rf, var: str, order: int, base: Sequence[str] | None = None) -> TSeries:
    """Laurent expansion of a :class:`RatFunc` in one of its variables."""
    from .ratfunc import RatFunc

    rf = rf if isinstance(rf, RatFunc) else RatFunc.from_poly(rf)
    if base is None:
        base = tuple(v for v in rf.vars if v != var)

    def as_series(p: MPoly, n) -> TSeries:
        by = p.by_power(var) if var in p.vars else {0: p}
        return TSeries(var, base, {k: c.extend(base) for k, c in by.items()}, n)

    den = rf.den
    dlow = den.min_degree_in(var) if var in den.vars else 0
    nlow = rf.num.min_degree_in(var) if var in rf.num.vars and rf.num else 0
    # a denominator known through t^M gives a quotient known through M - 2*dlow + nlow
    # (at least the leading term, for numerators vanishing beyond the order)
    d = as_series(den, max(order + 2 * dlow - nlow, dlow))
    return (as_series(rf.num, INF) * d.inverse()).truncate(order)
