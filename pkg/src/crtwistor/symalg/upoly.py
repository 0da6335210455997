"""Univariate rational polynomials: characteristic polynomials and Sturm counts.

Polynomials are lists of Fractions, lowest degree first.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def deriv(p):
    return trim([k * c for k, c in enumerate(p)][1:])


def evaluate(p, x):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def divmod_poly(a, b):
    a, b = trim(a), trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    while len(r) >= len(b) and r:
        k = len(r) - len(b)
        c = Fraction(r[-1]) / b[-1]
        q[k] = c
        for i, bc in enumerate(b):
            r[i + k] -= c * bc
        r = trim(r)
    return trim(q), r


def gcd_poly(a, b):
    a, b = trim(a), trim(b)
    while b:
        a, b = b, divmod_poly(a, b)[1]
    return [c / a[-1] for c in a] if a else a


def charpoly(m: Sequence[Sequence[Fraction]]):
    """``det(lambda I - M)`` by the Faddeev-LeVerrier recursion."""
    n = len(m)
    M = [[Fraction(x) for x in row] for row in m]
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    A = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for k in range(1, n + 1):
        AM = [[sum(A[i][l] * M[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
        c = -sum(AM[i][i] for i in range(n)) / k
        coeffs[n - k] = c
        A = [[AM[i][j] + (c if i == j else 0) for j in range(n)] for i in range(n)]
    return coeffs


def squarefree_parts(p):
    """Yun's algorithm: ``p = c * prod f_k^k`` returned as ``{k: f_k}``."""
    p = trim(p)
    out = {}
    a = gcd_poly(p, deriv(p))
    b = divmod_poly(p, a)[0]
    c = divmod_poly(deriv(p), a)[0]
    d = trim([ci - bi for ci, bi in zip(c + [0] * len(b), deriv(b) + [0] * len(c))])
    k = 1
    while len(b) > 1:
        a = gcd_poly(b, d)
        if len(a) > 1:
            out[k] = a
        b = divmod_poly(b, a)[0]
        c = divmod_poly(d, a)[0]
        d = trim([ci - bi for ci, bi in zip(c + [0] * len(b), deriv(b) + [0] * len(c))])
        k += 1
    return out


def sturm_chain(p):
    chain = [trim(p), deriv(p)]
    while chain[-1]:
        r = divmod_poly(chain[-2], chain[-1])[1]
        chain.append([-c for c in r])
    return [q for q in chain if q]


def _variations(vals):
    signs = [v > 0 for v in vals if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _sign_at_inf(p, positive: bool):
    lead = p[-1]
    deg = len(p) - 1
    return lead if positive or deg % 2 == 0 else -lead


def count_roots(p, lo=None, hi=None) -> int:
    """Distinct real roots in ``(lo, hi]``; ``None`` means infinity."""
    chain = sturm_chain(p)

    def at(x, positive):
        if x is None:
            return [_sign_at_inf(q, positive) for q in chain]
        return [evaluate(q, x) for q in chain]

    return _variations(at(lo, False)) - _variations(at(hi, True))


def signature(m) -> tuple[int, int, int]:
    """``(positive, negative, zero)`` eigenvalue counts of a real symmetric matrix."""
    n = len(m)
    for i in range(n):
        for j in range(n):
            if m[i][j] != m[j][i]:
                raise ValueError("matrix is not symmetric")
    p = charpoly(m)
    zero = 0
    while p and p[0] == 0:
        p = p[1:]
        zero += 1
    pos = neg = 0
    for k, f in squarefree_parts(p).items():
        pos += k * count_roots(f, 0, None)
        neg += k * count_roots(f, None, 0)
    if pos + neg + zero != n:
        raise ArithmeticError("characteristic polynomial is not real-rooted")
    return pos, neg, zero
