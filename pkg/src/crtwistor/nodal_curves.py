"""Normal sections on nodal rational curves and the related dimension counts.

Each branch of the nodal curve carries a node-centered affine coordinate
(z+ on the positive branch, z- on the negative one, the node at z = 0).
A normal section is ``a d_u + b d_s`` on C+ and ``a' d_v + b' d_s`` on C-,
with ``a`` allowed a simple pole at the node.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DomainError
from .symalg import GaussRat
from .symalg.linalg import nullspace, rank

G = GaussRat.coerce
I = GaussRat(0, 1)


@dataclass(frozen=True)
class BranchData:
    """``a = residue/z + reg[0] + reg[1] z + ...`` and ``b = bpoly[0] + bpoly[1] z + ...``."""

    residue: GaussRat
    reg: tuple = (G(0),)
    bpoly: tuple = (G(0),)

    def __post_init__(self):
        object.__setattr__(self, "residue", G(self.residue))
        object.__setattr__(self, "reg", tuple(G(x) for x in self.reg) or (G(0),))
        object.__setattr__(self, "bpoly", tuple(G(x) for x in self.bpoly) or (G(0),))

    @property
    def a0(self) -> GaussRat:
        return self.reg[0]

    @property
    def b(self) -> GaussRat:
        return self.bpoly[0]

    def holomorphic_at_infinity(self) -> bool:
        return not any(self.reg[1:]) and not any(self.bpoly[1:])

    def conj(self) -> "BranchData":
        return BranchData(self.residue.conj(), tuple(x.conj() for x in self.reg), tuple(x.conj() for x in self.bpoly))

    def scale(self, c) -> "BranchData":
        c = G(c)
        return BranchData(self.residue * c, tuple(x * c for x in self.reg), tuple(x * c for x in self.bpoly))

    def __add__(self, o: "BranchData") -> "BranchData":
        def padd(p, q):
            n = max(len(p), len(q))
            p, q = p + (G(0),) * (n - len(p)), q + (G(0),) * (n - len(q))
            return tuple(x + y for x, y in zip(p, q))

        return BranchData(self.residue + o.residue, padd(self.reg, o.reg), padd(self.bpoly, o.bpoly))

    def a_at(self, z) -> GaussRat:
        z = G(z)
        if not z:
            raise DomainError("a has a pole at the node")
        return self.residue / z + sum((c * z ** k for k, c in enumerate(self.reg)), G(0))


@dataclass(frozen=True)
class NormalSection:
    plus: BranchData
    minus: BranchData
    label: str = ""

    def __add__(self, o: "NormalSection") -> "NormalSection":
        return NormalSection(self.plus + o.plus, self.minus + o.minus)

    def scale(self, c) -> "NormalSection":
        return NormalSection(self.plus.scale(c), self.minus.scale(c))

    def degree(self) -> int:
        return max(len(br.reg) for br in (self.plus, self.minus)) - 1

    def same(self, o: "NormalSection") -> bool:
        d = self + o.scale(-1)
        deg = max(len(x) for br in (d.plus, d.minus) for x in (br.reg, br.bpoly)) - 1
        return not any(vector_of(d, deg))

    def real_conjugate(self) -> "NormalSection":
        """Image under the real structure, which swaps the branches and conjugates."""
        return NormalSection(self.minus.conj(), self.plus.conj(), self.label)

    def is_real(self) -> bool:
        return self.real_conjugate().same(self)

    def tangent_to_boundary(self) -> bool:
        """No residues: the deformation keeps the node (tangent to the nodal family)."""
        return not self.plus.residue and not self.minus.residue


def check_compatibility(s: NormalSection) -> bool:
    """Residue relations at the node: Res a = -Res a' and b' - b = Res a."""
    r, rp = s.plus.residue, s.minus.residue
    return r == -rp and s.minus.b - s.plus.b == r


def one_form_compatible(res_plus, res_minus) -> bool:
    """Matching condition for 1-forms on the two branches: the residues sum to zero."""
    return G(res_plus) + G(res_minus) == 0


def is_global(s: NormalSection) -> bool:
    return s.plus.holomorphic_at_infinity() and s.minus.holomorphic_at_infinity() and check_compatibility(s)


def _section(rp, a0p, bp, rm, a0m, bm, label=""):
    return NormalSection(BranchData(rp, (a0p,), (bp,)), BranchData(rm, (a0m,), (bm,)), label)


def standard_basis():
    """The privileged sections s0..s3 and their dual functionals s^0..s^3."""
    half = Fraction(1, 2)
    s0 = _section(-I, 0, I * half, I, 0, -I * half, "s0")
    s1 = _section(0, 0, half, 0, 0, half, "s1")
    s2 = _section(0, 1, 0, 0, 0, 0, "s2")
    s3 = _section(0, 0, 0, 0, 1, 0, "s3")
    return [s0, s1, s2, s3], DUAL


def _dual0(s):
    return s.plus.residue * I


def _dual1(s):
    return s.plus.b + s.minus.b


def _dual2(s):
    return s.plus.a0


def _dual3(s):
    return s.minus.a0


DUAL = [_dual0, _dual1, _dual2, _dual3]
IDENTIFICATION = {"s^1": "2 eta", "s^2": "theta1", "s^3": "theta1bar"}


def pairing_matrix(sections, dual=DUAL):
    return [[f(s) for s in sections] for f in dual]


def vector_of(s: NormalSection, degree: int = 2) -> list:
    """Coordinates (res, reg_0..reg_d, b_0..b_d) on both branches."""
    out = []
    for br in (s.plus, s.minus):
        reg = br.reg + (G(0),) * (degree + 1 - len(br.reg))
        bp = br.bpoly + (G(0),) * (degree + 1 - len(br.bpoly))
        out += [br.residue] + list(reg[: degree + 1]) + list(bp[: degree + 1])
    return out


def from_vector(v, degree: int = 2) -> NormalSection:
    k = 1 + 2 * (degree + 1)
    parts = []
    for off in (0, k):
        w = v[off: off + k]
        parts.append(BranchData(w[0], tuple(w[1: degree + 2]), tuple(w[degree + 2:])))
    return NormalSection(*parts)


def constraint_matrix(degree: int = 2) -> list:
    """Linear conditions for a global section in the Laurent ansatz of given degree."""
    n = 2 * (1 + 2 * (degree + 1))
    k = n // 2
    rows = []

    def row(entries):
        r = [G(0)] * n
        for i, c in entries:
            r[i] = G(c)
        rows.append(r)

    for off in (0, k):
        for j in range(1, degree + 1):
            row([(off + 1 + j, 1)])  # reg_j = 0
            row([(off + degree + 2 + j, 1)])  # b_j = 0
    row([(0, 1), (k, 1)])  # Res a + Res a' = 0
    row([(k + degree + 2, 1), (degree + 2, -1), (0, -1)])  # b' - b - Res a = 0
    return rows


def global_sections(degree: int = 2):
    """Basis of the global sections and the dimension count."""
    rows = constraint_matrix(degree)
    basis = [from_vector(v, degree) for v in nullspace(rows)]
    return basis


def spans(sections: Sequence[NormalSection], degree: int = 2) -> bool:
    target = global_sections(degree)
    a = [vector_of(s, degree) for s in sections]
    b = a + [vector_of(s, degree) for s in target]
    return rank(a) == rank(b) == len(target)


# -------------------------------------------------------------- L-sections
@dataclass(frozen=True)
class LSection:
    """``a + b z_+ + c z_-``; the coordinates z_+ and z_- are the branch coordinates."""

    a: GaussRat
    b: GaussRat
    c: GaussRat

    def __post_init__(self):
        for k in "abc":
            object.__setattr__(self, k, G(getattr(self, k)))

    def on_plus(self):
        """Restriction to C+ as coefficients of (1, z_+)."""
        return (self.a, self.b)

    def on_minus(self):
        return (self.a, self.c)


# ------------------------------------------------------- splitting types
@dataclass(frozen=True, order=True)
class SplittingType:
    a: int
    b: int
    c: int

    def __post_init__(self):
        if not self.a <= self.b <= self.c:
            raise ValueError("splitting type must be ordered a <= b <= c")

    def degrees(self):
        return (self.a, self.b, self.c)

    def shift(self, k: int) -> tuple:
        return (self.a + k, self.b + k, self.c + k)


CONSTRAINTS = {
    1: lambda a, b, c, total: a + b + c == total,
    2: lambda a, b, c, total: a >= 0,
    3: lambda a, b, c, total: c == 2 or (b == 2 and c > 2),
}


def splitting_enumerate(total_degree: int = 4, constraints: Iterable[int] = (1, 2, 3)) -> set:
    """All ordered triples meeting the chosen constraints (1) degree, (2) a >= 0, (3) T_P1 subsheaf."""
    cons = sorted(set(constraints))
    if 2 not in cons:
        raise ValueError("without a >= 0 the family of splitting types is unbounded")
    if 1 not in cons:
        raise ValueError("without the degree constraint the family is unbounded")
    out = set()
    for a, b, c in itertools.product(range(total_degree + 1), repeat=3):
        if a <= b <= c and all(CONSTRAINTS[k](a, b, c, total_degree) for k in cons):
            out.add(SplittingType(a, b, c))
    return out


def h0(d: int) -> int:
    return max(d + 1, 0)


def h1(d: int) -> int:
    return max(-d - 1, 0)


def line_bundle_cohomology(degrees: Iterable[int]) -> tuple[int, int]:
    ds = list(degrees)
    return sum(h0(d) for d in ds), sum(h1(d) for d in ds)


def nodal_cohomology(split1, split2, twist: tuple = (0, 0)) -> tuple[int, int]:
    """(h0, h1) of a bundle on a nodal curve through 0 -> E1(-p) -> E -> E2 -> 0.

    The node twist (-p) sits on the first branch; ``twist`` adds extra degrees
    on each branch (the line bundle of degree 0 on C1 and -1 on C2 is (0, -1)).
    """
    d1 = split1.degrees() if isinstance(split1, SplittingType) else tuple(split1)
    d2 = split2.degrees() if isinstance(split2, SplittingType) else tuple(split2)
    A = [d - 1 + twist[0] for d in d1]
    B = [d + twist[1] for d in d2]
    a0, a1 = line_bundle_cohomology(A)
    b0, b1 = line_bundle_cohomology(B)
    return a0 + b0, a1 + b1


AUT_P1 = 3
EQ11 = (0, 0, 2)


def deformation_dimension(split=EQ11) -> dict:
    h0_, h1_ = nodal_cohomology(split, split)
    if h1_:
        raise DomainError("obstructed: H^1 does not vanish")
    # each branch moves in a 2-dimensional family; meeting in a threefold is one condition
    nodal = 2 + 2 - 1
    return {"h0": h0_, "h1": h1_, "aut": AUT_P1, "dimension": h0_ - AUT_P1, "nodal_subfamily": nodal}
