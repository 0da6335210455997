"""Sparse multivariate (Laurent) polynomials over Q(i).

A polynomial keeps integer real and imaginary coefficient maps plus one
common positive denominator.  Exponent vectors may be negative, which turns
the same type into a Laurent polynomial; ``is_polynomial`` tells them apart.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Iterator, Mapping, Sequence

from ..errors import PoleError
from .gauss import GaussRat, ONE, ZERO, _norm

Exp = tuple


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def _grlex_key(e: Exp):
    return (sum(e), e)


class MPoly:
    __slots__ = ("vars", "re", "im", "den", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping[Exp, object] | None = None):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError(f"repeated variable names in {variables}")
        re_: dict = {}
        im_: dict = {}
        den = 1
        coeffs = []
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != len(variables):
                raise ValueError(f"exponent {e} does not match variables {variables}")
            c = GaussRat.coerce(c)
            if c:
                coeffs.append((e, c))
                den = _lcm(den, c.d)
        for e, c in coeffs:
            k = den // c.d
            if c.a:
                re_[e] = c.a * k
            if c.b:
                im_[e] = c.b * k
        self._set(variables, re_, im_, den)

    @classmethod
    def _raw(cls, variables, re_, im_, den) -> "MPoly":
        obj = object.__new__(cls)
        obj._set(variables, re_, im_, den)
        return obj

    def _set(self, variables, re_, im_, den):
        if den < 0:
            re_ = {e: -c for e, c in re_.items()}
            im_ = {e: -c for e, c in im_.items()}
            den = -den
        if not re_ and not im_:
            den = 1
        elif den != 1:
            g = den
            for c in re_.values():
                g = gcd(g, c)
                if g == 1:
                    break
            if g != 1:
                for c in im_.values():
                    g = gcd(g, c)
                    if g == 1:
                        break
            if g != 1:
                re_ = {e: c // g for e, c in re_.items()}
                im_ = {e: c // g for e, c in im_.items()}
                den //= g
        self.vars = variables
        self.re = re_
        self.im = im_
        self.den = den
        self._hash = None

    # ------------------------------------------------------------------ build
    @classmethod
    def zero(cls, variables: Sequence[str]) -> "MPoly":
        return cls._raw(tuple(variables), {}, {}, 1)

    @classmethod
    def const(cls, variables: Sequence[str], c) -> "MPoly":
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, variables: Sequence[str], name: str, power: int = 1) -> "MPoly":
        variables = tuple(variables)
        e = [0] * len(variables)
        e[variables.index(name)] = power
        return cls._raw(variables, {tuple(e): 1}, {}, 1)

    @classmethod
    def gens(cls, variables: Sequence[str]) -> list["MPoly"]:
        return [cls.var(variables, v) for v in variables]

    @classmethod
    def monomial(cls, variables: Sequence[str], exp: Exp, c=1) -> "MPoly":
        return cls(tuple(variables), {tuple(exp): c})

    # -------------------------------------------------------------- accessors
    def terms(self) -> Iterator[tuple[Exp, GaussRat]]:
        """Yield ``(exponent, coefficient)`` in graded-lex order, highest first."""
        for e in sorted(set(self.re) | set(self.im), key=_grlex_key, reverse=True):
            yield e, _norm(self.re.get(e, 0), self.im.get(e, 0), self.den)

    def as_dict(self) -> dict[Exp, GaussRat]:
        return dict(self.terms())

    def exponents(self) -> set:
        return set(self.re) | set(self.im)

    def coeff(self, exp: Exp) -> GaussRat:
        exp = tuple(exp)
        return _norm(self.re.get(exp, 0), self.im.get(exp, 0), self.den)

    def __len__(self):
        return len(self.exponents())

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def __bool__(self):
        return not self.is_zero()

    def is_constant(self) -> bool:
        ex = self.exponents()
        return not ex or ex == {(0,) * len(self.vars)}

    def constant_value(self) -> GaussRat:
        return self.coeff((0,) * len(self.vars))

    def is_polynomial(self) -> bool:
        return all(min(e, default=0) >= 0 for e in self.exponents())

    def is_real(self) -> bool:
        return not self.im

    def is_unit(self) -> bool:
        """Single-term Laurent monomial (a unit of the Laurent ring)."""
        return len(self.exponents()) == 1

    def total_degree(self) -> int:
        ex = self.exponents()
        return max((sum(e) for e in ex), default=-1)

    def min_degree(self) -> int | None:
        """Lowest total degree present (the vanishing order at the origin)."""
        ex = self.exponents()
        return min((sum(e) for e in ex), default=None)

    def degree(self, name: str) -> int:
        i = self.vars.index(name)
        return max((e[i] for e in self.exponents()), default=-1)

    def min_degree_in(self, name: str) -> int | None:
        i = self.vars.index(name)
        return min((e[i] for e in self.exponents()), default=None)

    def leading(self) -> tuple[Exp, GaussRat]:
        e = max(self.exponents(), key=_grlex_key)
        return e, self.coeff(e)

    # ---------------------------------------------------------- variable sets
    def extend(self, variables: Sequence[str]) -> "MPoly":
        """Re-express over ``variables`` (must contain all present variables)."""
        variables = tuple(variables)
        if variables == self.vars:
            return self
        idx = []
        for i, v in enumerate(self.vars):
            if v in variables:
                idx.append(variables.index(v))
            else:
                if any(e[i] for e in self.exponents()):
                    raise ValueError(f"variable {v} in use, cannot drop it")
                idx.append(None)
        n = len(variables)

        def remap(e):
            out = [0] * n
            for i, j in enumerate(idx):
                if j is not None:
                    out[j] = e[i]
            return tuple(out)

        return MPoly._raw(
            variables,
            {remap(e): c for e, c in self.re.items()},
            {remap(e): c for e, c in self.im.items()},
            self.den,
        )

    def _align(self, other) -> tuple["MPoly", "MPoly"]:
        if not isinstance(other, MPoly):
            other = MPoly.const(self.vars, other)
        if other.vars == self.vars:
            return self, other
        merged = self.vars + tuple(v for v in other.vars if v not in self.vars)
        return self.extend(merged), other.extend(merged)

    # ------------------------------------------------------------- arithmetic
    def __eq__(self, other):
        if isinstance(other, (int, Fraction, GaussRat)):
            other = MPoly.const(self.vars, other)
        if not isinstance(other, MPoly):
            return NotImplemented
        a, b = self._align(other)
        return a.re == b.re and a.im == b.im and a.den == b.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((frozenset(self.re.items()), frozenset(self.im.items()), self.den))
        return self._hash

    def __neg__(self):
        return MPoly._raw(
            self.vars,
            {e: -c for e, c in self.re.items()},
            {e: -c for e, c in self.im.items()},
            self.den,
        )

    def _addsub(self, other, sign: int) -> "MPoly":
        try:
            a, b = self._align(other)
        except TypeError:
            return NotImplemented
        if b.is_zero():
            return a
        if a.is_zero():
            return b if sign > 0 else -b
        den = _lcm(a.den, b.den)
        ka, kb = den // a.den, sign * (den // b.den)
        re_ = {e: c * ka for e, c in a.re.items()} if ka != 1 else dict(a.re)
        im_ = {e: c * ka for e, c in a.im.items()} if ka != 1 else dict(a.im)
        for src, dst in ((b.re, re_), (b.im, im_)):
            for e, c in src.items():
                v = dst.get(e, 0) + c * kb
                if v:
                    dst[e] = v
                else:
                    dst.pop(e, None)
        return MPoly._raw(a.vars, re_, im_, den)

    def __add__(self, other):
        return self._addsub(other, 1)

    def __radd__(self, other):
        return self._addsub(other, 1)

    def __sub__(self, other):
        return self._addsub(other, -1)

    def __rsub__(self, other):
        return (-self)._addsub(other, 1)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussRat)):
            return self.scale(other)
        if not isinstance(other, MPoly):
            return NotImplemented
        a, b = self._align(other)
        if a.is_zero() or b.is_zero():
            return MPoly.zero(a.vars)
        rr = _mul_int(a.re, b.re)
        if a.im or b.im:
            ii = _mul_int(a.im, b.im)
            ri = _mul_int(a.re, b.im)
            ir = _mul_int(a.im, b.re)
            re_ = _combine(rr, ii, -1)
            im_ = _combine(ri, ir, 1)
        else:
            re_, im_ = rr, {}
        return MPoly._raw(a.vars, re_, im_, a.den * b.den)

    def __rmul__(self, other):
        return self.__mul__(other)

    def scale(self, c) -> "MPoly":
        c = GaussRat.coerce(c)
        if not c:
            return MPoly.zero(self.vars)
        if c.b == 0:
            return MPoly._raw(
                self.vars,
                {e: v * c.a for e, v in self.re.items()},
                {e: v * c.a for e, v in self.im.items()},
                self.den * c.d,
            )
        re_ = _combine({e: v * c.a for e, v in self.re.items()}, {e: v * c.b for e, v in self.im.items()}, -1)
        im_ = _combine({e: v * c.b for e, v in self.re.items()}, {e: v * c.a for e, v in self.im.items()}, 1)
        return MPoly._raw(self.vars, re_, im_, self.den * c.d)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, GaussRat)):
            return self.scale(GaussRat.coerce(other).inverse())
        if isinstance(other, MPoly):
            if other.is_unit():
                return self * other.unit_inverse()
            q, r = self.divmod(other)
            if r:
                raise ValueError("inexact polynomial division")
            return q
        return NotImplemented

    def unit_inverse(self) -> "MPoly":
        if not self.is_unit():
            raise ZeroDivisionError("not a Laurent monomial")
        (e, c), = self.terms()
        return MPoly.monomial(self.vars, tuple(-k for k in e), c.inverse())

    def __pow__(self, n: int) -> "MPoly":
        if n < 0:
            return self.unit_inverse() ** (-n)
        out = MPoly.const(self.vars, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def conj(self) -> "MPoly":
        """Conjugate the coefficients (variables are left alone)."""
        return MPoly._raw(self.vars, dict(self.re), {e: -c for e, c in self.im.items()}, self.den)

    # -------------------------------------------------------------- calculus
    def diff(self, name: str) -> "MPoly":
        if name not in self.vars:
            return MPoly.zero(self.vars)
        i = self.vars.index(name)

        def d(src):
            out = {}
            for e, c in src.items():
                k = e[i]
                if k:
                    e2 = e[:i] + (k - 1,) + e[i + 1:]
                    out[e2] = c * k
            return out

        return MPoly._raw(self.vars, d(self.re), d(self.im), self.den)

    # ----------------------------------------------------------- evaluation
    def eval(self, point: Mapping[str, object]) -> GaussRat:
        """Evaluate at a point assigning every variable."""
        missing = [v for v in self.vars if v not in point and any(e[self.vars.index(v)] for e in self.exponents())]
        if missing:
            raise ValueError(f"point does not assign {missing}")
        vals = [GaussRat.coerce(point.get(v, 0)) for v in self.vars]
        cache: list[dict] = [dict() for _ in self.vars]
        total = ZERO
        for e, c in self.terms():
            term = c
            for i, k in enumerate(e):
                if k == 0:
                    continue
                p = cache[i].get(k)
                if p is None:
                    if k < 0 and not vals[i]:
                        raise PoleError()
                    p = vals[i] ** k
                    cache[i][k] = p
                term = term * p
            total = total + term
        return total

    def subs(self, mapping: Mapping[str, object], variables: Sequence[str] | None = None) -> "MPoly":
        """Substitute polynomials (or constants) for variables.

        The result lives over ``variables`` if given, otherwise over the union
        of the untouched variables and those of the substituted values.
        """
        targets = {}
        for k, v in mapping.items():
            if k in self.vars:
                targets[k] = v
        keep = [v for v in self.vars if v not in targets]
        if variables is None:
            out_vars = list(keep)
            for v in targets.values():
                if isinstance(v, MPoly):
                    out_vars += [w for w in v.vars if w not in out_vars]
            variables = tuple(out_vars)
        variables = tuple(variables)
        imgs = []
        for i, name in enumerate(self.vars):
            if name in targets:
                val = targets[name]
                imgs.append(val.extend(variables) if isinstance(val, MPoly) else MPoly.const(variables, val))
            else:
                imgs.append(MPoly.var(variables, name))
        powers: list[dict] = [dict() for _ in self.vars]

        def pw(i, k):
            if k not in powers[i]:
                if k == 0:
                    powers[i][k] = None
                elif k > 0 and k - 1 in powers[i] and powers[i][k - 1] is not None:
                    powers[i][k] = powers[i][k - 1] * imgs[i]
                else:
                    powers[i][k] = imgs[i] ** k
            return powers[i][k]

        acc = MPoly.zero(variables)
        for e, c in self.terms():
            term = MPoly.const(variables, c)
            for i, k in enumerate(e):
                if k:
                    term = term * pw(i, k)
            acc = acc + term
        return acc

    def coefficient_in(self, name: str, power: int) -> "MPoly":
        """Coefficient of ``name**power`` as a polynomial in the other variables."""
        i = self.vars.index(name)
        rest = self.vars[:i] + self.vars[i + 1:]
        pick = lambda src: {e[:i] + e[i + 1:]: c for e, c in src.items() if e[i] == power}
        return MPoly._raw(rest, pick(self.re), pick(self.im), self.den)

    def by_power(self, name: str) -> dict[int, "MPoly"]:
        i = self.vars.index(name)
        return {k: self.coefficient_in(name, k) for k in sorted({e[i] for e in self.exponents()})}

    def truncate_degree(self, max_deg: int, names: Iterable[str] | None = None) -> "MPoly":
        """Drop terms whose degree in ``names`` (default: all) exceeds ``max_deg``."""
        idx = [self.vars.index(n) for n in (names if names is not None else self.vars)]
        keep = lambda src: {e: c for e, c in src.items() if sum(e[i] for i in idx) <= max_deg}
        return MPoly._raw(self.vars, keep(self.re), keep(self.im), self.den)

    # -------------------------------------------------------------- division
    def divmod(self, divisor: "MPoly") -> tuple["MPoly", "MPoly"]:
        """Multivariate division by one polynomial in graded-lex order."""
        a, b = self._align(divisor)
        if b.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        lb_e, lb_c = b.leading()
        lb_inv = lb_c.inverse()
        q = MPoly.zero(a.vars)
        r = MPoly.zero(a.vars)
        p = a
        while p:
            e, c = p.leading()
            diff = tuple(x - y for x, y in zip(e, lb_e))
            if min(diff) >= 0:
                t = MPoly.monomial(a.vars, diff, c * lb_inv)
                q = q + t
                p = p - t * b
            else:
                t = MPoly.monomial(a.vars, e, c)
                r = r + t
                p = p - t
        return q, r

    def divides(self, other: "MPoly") -> bool:
        return not other.divmod(self)[1]

    def content(self) -> GaussRat:
        """Rational content for real polynomials, leading coefficient otherwise."""
        if self.is_zero():
            return ONE
        return self.leading()[1]

    def monic(self) -> "MPoly":
        return self.scale(self.leading()[1].inverse()) if self else self

    # ------------------------------------------------------------------ text
    def __repr__(self):
        return f"MPoly({self.vars}, {self})"

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for e, c in self.terms():
            mono = "*".join(
                (v if k == 1 else f"{v}^{k}") for v, k in zip(self.vars, e) if k
            )
            cs = str(c)
            if not mono:
                parts.append(f"({cs})" if ("+" in cs[1:] or "-" in cs[1:]) else cs)
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"({cs})*{mono}" if ("+" in cs[1:] or "-" in cs[1:]) else f"{cs}*{mono}")
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out


def _mul_int(a: dict, b: dict) -> dict:
    if not a or not b:
        return {}
    if len(a) < len(b):
        a, b = b, a
    out: dict = {}
    get = out.get
    bi = list(b.items())
    for ea, ca in a.items():
        for eb, cb in bi:
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c}


def _combine(x: dict, y: dict, sign: int) -> dict:
    out = {e: c for e, c in x.items() if c}
    for e, c in y.items():
        v = out.get(e, 0) + sign * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out
