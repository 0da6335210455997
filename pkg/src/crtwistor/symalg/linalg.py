"""Exact Gaussian elimination over the Gaussian rationals."""
from __future__ import annotations

from dataclasses import dataclass

from .gauss import GaussRat

_ZERO = GaussRat.coerce(0)


def as_matrix(rows) -> list:
    return [[GaussRat.coerce(x) for x in row] for row in rows]


def rref(rows, ncols: int | None = None):
    """Reduced row echelon form; returns (matrix, pivot columns)."""
    m = [list(r) for r in as_matrix(rows)]
    if not m:
        return m, []
    ncols = len(m[0]) if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][c].inverse()
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows) -> int:
    return len(rref(rows)[1])


def nullspace(rows, ncols: int | None = None) -> list:
    """Basis of the kernel, one vector per free column."""
    if ncols is None:
        ncols = len(rows[0])
    if not rows:
        return [[GaussRat.coerce(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    m, piv = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [_ZERO] * ncols
        v[f] = GaussRat.coerce(1)
        for r, c in enumerate(piv):
            v[c] = -m[r][f]
        basis.append(v)
    return basis


@dataclass
class SolveResult:
    solution: list | None  # one particular solution (free variables set to 0)
    rank: int
    consistent: bool
    nullity: int

    @property
    def unique(self) -> bool:
        return self.consistent and self.nullity == 0


def solve(rows, rhs) -> SolveResult:
    """Solve ``A x = b`` exactly."""
    A = as_matrix(rows)
    n = len(A[0]) if A else 0
    aug = [r + [GaussRat.coerce(b)] for r, b in zip(A, rhs)]
    m, piv = rref(aug, n + 1)
    consistent = n not in piv
    piv = [c for c in piv if c < n]
    if not consistent:
        return SolveResult(None, len(piv), False, n - len(piv))
    x = [_ZERO] * n
    for r, c in enumerate(piv):
        x[c] = m[r][n]
    return SolveResult(x, len(piv), True, n - len(piv))
