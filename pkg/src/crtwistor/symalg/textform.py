"""Canonical text form for MPoly, RatFunc and TSeries.

A header line names the kind and the variables; each term is one line
``e1 e2 ... | coefficient`` in graded-lex order, highest first. Dumping and
loading round-trip exactly.
"""
from __future__ import annotations

import math

from .gauss import GaussRat
from .mpoly import MPoly
from .ratfunc import RatFunc
from .series import TSeries


def _term_lines(p: MPoly) -> list[str]:
    return [" ".join(str(k) for k in e) + " | " + str(c) for e, c in p.terms()]


def _parse_terms(lines, variables) -> MPoly:
    terms = {}
    for line in lines:
        exps, coeff = line.split("|")
        e = tuple(int(k) for k in exps.split())
        if len(e) != len(variables):
            raise ValueError(f"exponent vector {e} does not match {variables}")
        terms[e] = GaussRat.parse(coeff.strip())
    return MPoly(variables, terms)


def _vars(spec: str) -> tuple[str, ...]:
    return tuple(v for v in spec.split(",") if v)


def dumps(obj) -> str:
    if isinstance(obj, MPoly):
        return "\n".join([f"MPoly[{','.join(obj.vars)}]"] + _term_lines(obj))
    if isinstance(obj, RatFunc):
        out = [f"RatFunc[{','.join(obj.vars)}]", "num"] + _term_lines(obj.num)
        for f, k in sorted(obj.factors.items(), key=lambda fk: dumps(fk[0])):
            out += [f"factor {k}"] + _term_lines(f)
        return "\n".join(out)
    if isinstance(obj, TSeries):
        order = "inf" if obj.order == math.inf else str(obj.order)
        out = [f"TSeries[{obj.var};{','.join(obj.base)}] order={order}"]
        for k, c in obj.items():
            out += [f"coeff {k}"] + _term_lines(c)
        return "\n".join(out)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _sections(lines):
    """Split lines into (header, body) groups on non-term lines."""
    groups = []
    for line in lines:
        if "|" in line:
            groups[-1][1].append(line)
        else:
            groups.append((line, []))
    return groups


def loads(text: str):
    lines = [ln for ln in text.strip().split("\n") if ln.strip()]
    head = lines[0]
    kind, rest = head.split("[", 1)
    inside, tail = rest.split("]", 1)
    if kind == "MPoly":
        return _parse_terms(lines[1:], _vars(inside))
    if kind == "RatFunc":
        variables = _vars(inside)
        groups = _sections(lines[1:])
        if not groups or groups[0][0] != "num":
            raise ValueError("RatFunc text must start with a num section")
        num = _parse_terms(groups[0][1], variables)
        factors = {}
        for label, body in groups[1:]:
            tag, k = label.split()
            if tag != "factor":
                raise ValueError(f"unexpected section {label!r}")
            factors[_parse_terms(body, variables)] = int(k)
        return RatFunc._make(variables, num, factors)
    if kind == "TSeries":
        var, base = inside.split(";")
        order_txt = tail.strip().removeprefix("order=")
        order = math.inf if order_txt == "inf" else int(order_txt)
        coeffs = {}
        for label, body in _sections(lines[1:]):
            tag, k = label.split()
            if tag != "coeff":
                raise ValueError(f"unexpected section {label!r}")
            coeffs[int(k)] = _parse_terms(body, _vars(base))
        return TSeries(var, _vars(base), coeffs, order)
    raise ValueError(f"unknown kind {kind!r}")
