"""Rational functions over Q(i) with denominators kept in factored form.

The denominator is a product of monic irreducible factors with multiplicities.
Reduction is then trial division of the numerator by those factors, which is
exact and cheap; a full multivariate factorization (via sympy) is needed only
when dividing by a numerator that has not been seen before.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

import sympy

from ..errors import PoleError
from .gauss import GaussRat
from .mpoly import MPoly

_FACTOR_CACHE: dict = {}


def _to_sympy(p: MPoly, gens):
    data = {}
    for e, c in p.terms():
        data[e] = sympy.Rational(c.re.numerator, c.re.denominator) + sympy.I * sympy.Rational(
            c.im.numerator, c.im.denominator
        )
    return sympy.Poly.from_dict(data, *gens, domain=sympy.QQ_I)


def _from_sympy(poly, variables) -> MPoly:
    terms = {}
    for e, c in poly.as_dict().items():
        re_, im_ = sympy.re(c), sympy.im(c)
        terms[e] = GaussRat(Fraction(int(re_.p), int(re_.q)), Fraction(int(im_.p), int(im_.q)))
    return MPoly(variables, terms)


def factor(p: MPoly) -> tuple[GaussRat, list[tuple[MPoly, int]]]:
    """Irreducible factorization over Q(i) with monic (graded-lex) factors."""
    if p.is_zero():
        raise ZeroDivisionError("cannot factor zero")
    key = p
    hit = _FACTOR_CACHE.get(key)
    if hit is not None:
        return hit
    if p.is_constant():
        out = (p.constant_value(), [])
    else:
        gens = sympy.symbols(" ".join(f"_g{i}" for i in range(len(p.vars))), seq=True)
        const, facs = _to_sympy(p, gens).factor_list()
        c = GaussRat.coerce(0) + _from_sympy(sympy.Poly(const, *gens, domain=sympy.QQ_I), p.vars).constant_value()
        flist = []
        for f, k in facs:
            m = _from_sympy(f, p.vars)
            lead = m.leading()[1]
            c = c * lead ** k
            flist.append((m.monic(), k))
        out = (c, flist)
    _FACTOR_CACHE[key] = out
    return out


class RatFunc:
    __slots__ = ("vars", "num", "factors")

    def __init__(self, num, den=None, variables: Sequence[str] | None = None):
        if isinstance(num, RatFunc):
            if den is not None:
                raise TypeError("use division to combine RatFuncs")
            self.vars, self.num, self.factors = num.vars, num.num, num.factors
            return
        if not isinstance(num, MPoly):
            if variables is None:
                raise TypeError("constant RatFunc needs a variable list")
            num = MPoly.const(variables, num)
        if den is None:
            den = MPoly.const(num.vars, 1)
        elif not isinstance(den, MPoly):
            den = MPoly.const(num.vars, den)
        num, den = num._align(den)
        if variables is not None:
            num, den = num.extend(variables), den.extend(variables)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not (num.is_polynomial() and den.is_polynomial()):
            raise ValueError("RatFunc parts must be polynomials")
        c, facs = factor(den)
        self._init(num.vars, num.scale(c.inverse()), {f: k for f, k in facs})

    @classmethod
    def _make(cls, variables, num: MPoly, factors: dict) -> "RatFunc":
        obj = object.__new__(cls)
        obj._init(variables, num, factors)
        return obj

    def _init(self, variables, num, factors):
        reduced = {}
        if num.is_zero():
            factors = {}
        for f, k in factors.items():
            if k <= 0:
                continue
            while k and num:
                q, r = num.divmod(f)
                if r:
                    break
                num = q
                k -= 1
            if k:
                reduced[f] = k
        self.vars = tuple(variables)
        self.num = num
        self.factors = reduced

    # ------------------------------------------------------------- builders
    @classmethod
    def from_poly(cls, p: MPoly) -> "RatFunc":
        return cls._make(p.vars, p, {})

    @classmethod
    def var(cls, variables: Sequence[str], name: str) -> "RatFunc":
        return cls.from_poly(MPoly.var(variables, name))

    @classmethod
    def const(cls, variables: Sequence[str], c) -> "RatFunc":
        return cls.from_poly(MPoly.const(variables, c))

    @property
    def den(self) -> MPoly:
        out = MPoly.const(self.vars, 1)
        for f, k in self.factors.items():
            out = out * f ** k
        return out

    def is_polynomial(self) -> bool:
        return not self.factors

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.is_zero()

    def is_constant(self) -> bool:
        return not self.factors and self.num.is_constant()

    # ------------------------------------------------------------ alignment
    def _coerce(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, MPoly):
            return RatFunc.from_poly(other)
        return RatFunc.const(self.vars, other)

    def _align(self, other) -> tuple["RatFunc", "RatFunc"]:
        other = self._coerce(other)
        if other.vars == self.vars:
            return self, other
        merged = self.vars + tuple(v for v in other.vars if v not in self.vars)
        return self.extend(merged), other.extend(merged)

    def extend(self, variables) -> "RatFunc":
        variables = tuple(variables)
        if variables == self.vars:
            return self
        return RatFunc._make(
            variables, self.num.extend(variables), {f.extend(variables): k for f, k in self.factors.items()}
        )

    # ----------------------------------------------------------- arithmetic
    def __eq__(self, other):
        if isinstance(other, (int, Fraction, GaussRat, MPoly, RatFunc)):
            a, b = self._align(other)
            return a.num == b.num and a.factors == b.factors
        return NotImplemented

    def __hash__(self):
        return hash((self.num, frozenset(self.factors.items())))

    def __neg__(self):
        return RatFunc._make(self.vars, -self.num, dict(self.factors))

    def _addsub(self, other, sign):
        a, b = self._align(other)
        if b.is_zero():
            return a
        if a.is_zero():
            return b if sign > 0 else -b
        keys = set(a.factors) | set(b.factors)
        common = {f: max(a.factors.get(f, 0), b.factors.get(f, 0)) for f in keys}
        na, nb = a.num, b.num
        for f, k in common.items():
            ka, kb = k - a.factors.get(f, 0), k - b.factors.get(f, 0)
            if ka:
                na = na * f ** ka
            if kb:
                nb = nb * f ** kb
        return RatFunc._make(a.vars, na + nb if sign > 0 else na - nb, common)

    def __add__(self, other):
        return self._addsub(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._addsub(other, -1)

    def __rsub__(self, other):
        return (-self)._addsub(other, 1)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussRat)):
            return RatFunc._make(self.vars, self.num.scale(other), dict(self.factors))
        a, b = self._align(other)
        if a.is_zero() or b.is_zero():
            return RatFunc.const(a.vars, 0)
        facs = dict(a.factors)
        for f, k in b.factors.items():
            facs[f] = facs.get(f, 0) + k
        return RatFunc._make(a.vars, a.num * b.num, facs)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise ZeroDivisionError("RatFunc division by zero")
        c, facs = factor(self.num)
        num = MPoly.const(self.vars, c.inverse())
        for f, k in self.factors.items():
            num = num * f ** k
        return RatFunc._make(self.vars, num, {f: k for f, k in facs})

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, GaussRat)):
            return self * GaussRat.coerce(other).inverse()
        a, b = self._align(other)
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "RatFunc":
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc._make(self.vars, self.num ** n, {f: k * n for f, k in self.factors.items()})

    def conj(self) -> "RatFunc":
        # conjugating a monic irreducible factor gives a monic irreducible factor
        return RatFunc._make(self.vars, self.num.conj(), {f.conj(): k for f, k in self.factors.items()})

    # --------------------------------------------------------------- calculus
    def diff(self, name: str) -> "RatFunc":
        """Quotient-rule derivative, normalized."""
        if name not in self.vars:
            return RatFunc.const(self.vars, 0)
        if not self.factors:
            return RatFunc.from_poly(self.num.diff(name))
        # d(N / prod f^k) = (N' F - N sum k f' F/f) / (prod f^k * F),  F = prod f
        fl = list(self.factors.items())
        F = MPoly.const(self.vars, 1)
        for f, _ in fl:
            F = F * f
        top = self.num.diff(name) * F
        for i, (f, k) in enumerate(fl):
            df = f.diff(name)
            if df.is_zero():
                continue
            rest = MPoly.const(self.vars, k)
            for j, (g, _) in enumerate(fl):
                if j != i:
                    rest = rest * g
            top = top - self.num * df * rest
        return RatFunc._make(self.vars, top, {f: k + 1 for f, k in fl})

    def eval(self, point: Mapping[str, object]) -> GaussRat:
        den = GaussRat.coerce(1)
        for f, k in self.factors.items():
            v = f.eval(point)
            if not v:
                raise PoleError()
            den = den * v ** k
        return self.num.eval(point) / den

    def subs(self, mapping: Mapping[str, object], variables: Sequence[str] | None = None) -> "RatFunc":
        """Substitute polynomial or RatFunc values for variables."""
        if any(isinstance(v, RatFunc) for v in mapping.values()):
            if variables is None:
                raise ValueError("give the target variables when substituting RatFuncs")
            variables = tuple(variables)
            out = _subs_rat(self.num, mapping, variables)
            for f, k in self.factors.items():
                out = out / _subs_rat(f, mapping, variables) ** k
            return out
        num = self.num.subs(mapping, variables)
        den = MPoly.const(num.vars, 1)
        for f, k in self.factors.items():
            den = den * f.subs(mapping, num.vars) ** k
        return RatFunc(num, den)

    def sqrt(self) -> "RatFunc":
        """Exact square root of a perfect square; raises ``ValueError`` otherwise."""
        if any(k % 2 for k in self.factors.values()):
            raise ValueError("denominator is not a perfect square")
        c, facs = factor(self.num) if self.num else (GaussRat.coerce(0), [])
        if any(k % 2 for _, k in facs):
            raise ValueError("numerator is not a perfect square")
        num = MPoly.const(self.vars, c.sqrt())
        for f, k in facs:
            num = num * f ** (k // 2)
        return RatFunc._make(self.vars, num, {f: k // 2 for f, k in self.factors.items()})

    def order_at_origin(self) -> int | None:
        """Vanishing order at the origin (denominator must not vanish there)."""
        for f in self.factors:
            if not f.constant_value():
                raise PoleError("denominator vanishes at the origin")
        return self.num.min_degree()

    def __repr__(self):
        return f"RatFunc({self})"

    def __str__(self):
        if not self.factors:
            return str(self.num)
        den = "*".join(f"({f})" + (f"^{k}" if k > 1 else "") for f, k in self.factors.items())
        return f"({self.num})/({den})"


def _subs_rat(p: MPoly, mapping, variables) -> RatFunc:
    acc = RatFunc.const(variables, 0)
    imgs = {}
    for name in p.vars:
        v = mapping.get(name)
        if v is None:
            imgs[name] = RatFunc.var(variables, name)
        elif isinstance(v, RatFunc):
            imgs[name] = v.extend(variables)
        elif isinstance(v, MPoly):
            imgs[name] = RatFunc.from_poly(v.extend(variables))
        else:
            imgs[name] = RatFunc.const(variables, v)
    for e, c in p.terms():
        t = RatFunc.const(variables, c)
        for name, k in zip(p.vars, e):
            if k:
                t = t * imgs[name] ** k
        acc = acc + t
    return acc
