"""Differential forms with exact coefficients on a coordinate chart.

A form stores its components on strictly increasing index tuples. Any scalar
ring with ``+ - *``, ``diff`` and ``is_zero`` works (MPoly, RatFunc, TSeries).
"""
from __future__ import annotations

import itertools
from typing import Callable, Mapping, Sequence

from .tensor import perm_sign


def _sort_idx(idx):
    if len(set(idx)) != len(idx):
        return 0, None
    return perm_sign(idx), tuple(sorted(idx))


class Form:
    __slots__ = ("coords", "degree", "comps")

    def __init__(self, coords: Sequence[str], degree: int, comps: Mapping | None = None):
        self.coords = tuple(coords)
        self.degree = degree
        out = {}
        for idx, c in (comps or {}).items():
            idx = tuple(self.coords.index(i) if isinstance(i, str) else i for i in idx)
            if len(idx) != degree:
                raise ValueError("index length does not match degree")
            s, key = _sort_idx(idx)
            if not s or c.is_zero():
                continue
            c = c if s > 0 else -c
            out[key] = out[key] + c if key in out else c
        self.comps = {k: v for k, v in out.items() if not v.is_zero()}

    @classmethod
    def one_form(cls, coords, coeffs: Sequence) -> "Form":
        return cls(coords, 1, {(i,): c for i, c in enumerate(coeffs)})

    @classmethod
    def scalar(cls, coords, f) -> "Form":
        return cls(coords, 0, {(): f})

    def coeff(self, *idx):
        idx = tuple(self.coords.index(i) if isinstance(i, str) else i for i in idx)
        s, key = _sort_idx(idx)
        if not s or key not in self.comps:
            return None
        c = self.comps[key]
        return c if s > 0 else -c

    def coeff_or(self, zero, *idx):
        c = self.coeff(*idx)
        return zero if c is None else c

    def is_zero(self) -> bool:
        return not self.comps

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        return self.coords == other.coords and self.degree == other.degree and (self - other).is_zero()

    __hash__ = None

    def map(self, fn: Callable) -> "Form":
        return Form(self.coords, self.degree, {k: fn(v) for k, v in self.comps.items()})

    def __add__(self, other: "Form") -> "Form":
        if other.degree != self.degree or other.coords != self.coords:
            raise ValueError("forms of different type")
        out = dict(self.comps)
        for k, v in other.comps.items():
            out[k] = out[k] + v if k in out else v
        return Form(self.coords, self.degree, out)

    def __neg__(self):
        return Form(self.coords, self.degree, {k: -v for k, v in self.comps.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f) -> "Form":
        return Form(self.coords, self.degree, {k: v * f for k, v in self.comps.items()})

    __mul__ = scale

    def wedge(self, other: "Form") -> "Form":
        out: dict = {}
        for a, x in self.comps.items():
            for b, y in other.comps.items():
                s, key = _sort_idx(a + b)
                if not s:
                    continue
                p = x * y
                p = p if s > 0 else -p
                out[key] = out[key] + p if key in out else p
        return Form(self.coords, self.degree + other.degree, out)

    __xor__ = wedge

    def d(self) -> "Form":
        out: dict = {}
        for idx, c in self.comps.items():
            for m, name in enumerate(self.coords):
                if m in idx:
                    continue
                dc = c.diff(name)
                if dc.is_zero():
                    continue
                s, key = _sort_idx((m,) + idx)
                dc = dc if s > 0 else -dc
                out[key] = out[key] + dc if key in out else dc
        return Form(self.coords, self.degree + 1, out)

    def interior(self, vec: Sequence) -> "Form":
        """Contraction with a vector given by its components (``None`` means 0)."""
        out: dict = {}
        for idx, c in self.comps.items():
            for pos, i in enumerate(idx):
                v = vec[i]
                if v is None or v.is_zero():
                    continue
                rest = idx[:pos] + idx[pos + 1:]
                p = c * v
                p = p if pos % 2 == 0 else -p
                out[rest] = out[rest] + p if rest in out else p
        return Form(self.coords, self.degree - 1, out)

    def apply(self, *vecs):
        """Evaluate on vectors: ``w(X1, ..., Xk)``."""
        f = self
        for v in vecs:
            f = f.interior(v)
        return f.comps.get(())

    def pullback(self, new_coords: Sequence[str], images: Mapping[str, object], subs: Callable) -> "Form":
        """Pull back along a map given by ``old coordinate -> scalar in new coordinates``.

        ``subs(c)`` must carry a coefficient to the new chart (composition).
        """
        new_coords = tuple(new_coords)
        dimg = {name: Form.one_form(new_coords, [images[name].diff(n) for n in new_coords]) for name in self.coords}
        out = None
        for idx, c in self.comps.items():
            term = Form.scalar(new_coords, subs(c))
            for i in idx:
                term = term.wedge(dimg[self.coords[i]])
            out = term if out is None else out + term
        return out if out is not None else Form(new_coords, self.degree)

    def __repr__(self):
        parts = [f"({v})*d{'^d'.join(self.coords[i] for i in k)}" for k, v in sorted(self.comps.items())]
        return " + ".join(parts) or "0"


def top_indices(n: int, k: int):
    return list(itertools.combinations(range(n), k))
