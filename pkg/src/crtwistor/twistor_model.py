"""Flags in C^{1,2}: the twistor space of the complex hyperbolic plane.

Lines are stored as vectors and planes as covectors (annihilators); both are
projective, so comparisons are up to a nonzero scalar.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DomainError
from .symalg import GaussRat

H = (1, -1, -1)
ZERO = GaussRat.coerce(0)


def vec(*xs) -> tuple:
    if len(xs) == 1 and isinstance(xs[0], (tuple, list)):
        xs = tuple(xs[0])
    if len(xs) != 3:
        raise ValueError("expected three components")
    return tuple(GaussRat.coerce(x) for x in xs)


E1, E2, E3 = vec(1, 0, 0), vec(0, 1, 0), vec(0, 0, 1)


def herm(z, w) -> GaussRat:
    """h(z, w) = z1 conj(w1) - z2 conj(w2) - z3 conj(w3)."""
    return sum((z[i] * w[i].conj() * H[i] for i in range(3)), ZERO)


def pair(cov, v) -> GaussRat:
    return sum((cov[i] * v[i] for i in range(3)), ZERO)


def cross(a, b) -> tuple:
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def det3(a, b, c) -> GaussRat:
    return pair(cross(a, b), c)


def is_nonzero(v) -> bool:
    return any(x for x in v)


def proportional(a, b) -> bool:
    return not is_nonzero(cross(a, b))


def normalize(v) -> tuple:
    """Scale so the last nonzero coordinate is 1 (a canonical projective representative)."""
    for x in reversed(v):
        if x:
            inv = x.inverse()
            return tuple(c * inv for c in v)
    raise DomainError("zero vector is not a projective point")


def perp_of_line(v) -> tuple:
    """Covector of the plane D^perp."""
    return tuple(v[i].conj() * H[i] for i in range(3))


def perp_of_plane(p) -> tuple:
    """Vector spanning P^perp."""
    return tuple(p[i].conj() * H[i] for i in range(3))


def plane_basis(p) -> tuple:
    """Two vectors spanning ker p."""
    cands = [cross(p, e) for e in (E1, E2, E3)]
    cands = [c for c in cands if is_nonzero(c)]
    b1 = cands[0]
    for c in cands[1:]:
        if not proportional(b1, c):
            return b1, c
    raise DomainError("covector is zero")


def classify_line(v) -> str:
    if not is_nonzero(v):
        raise DomainError("zero vector is not a line")
    n = herm(v, v).re
    return "positive" if n > 0 else ("negative" if n < 0 else "isotropic")


def classify_plane(p) -> str:
    """Signature of h restricted to ker p, read off from p^perp."""
    kind = classify_line(perp_of_plane(p))
    return {"negative": "(1,1)", "positive": "(0,2)", "isotropic": "isotropic"}[kind]


@dataclass(frozen=True)
class FlagPoint:
    D: tuple
    P: tuple

    def __post_init__(self):
        object.__setattr__(self, "D", vec(self.D))
        object.__setattr__(self, "P", vec(self.P))
        if not is_nonzero(self.D) or not is_nonzero(self.P):
            raise DomainError("flag components must be nonzero")
        if pair(self.P, self.D):
            raise DomainError("incidence D in P fails")

    def same(self, other: "FlagPoint") -> bool:
        return proportional(self.D, other.D) and proportional(self.P, other.P)

    def in_domain(self) -> bool:
        return classify_line(self.D) == "negative" and classify_plane(self.P) == "(1,1)"

    def component(self) -> str:
        """'N' (interior), 'T+', 'T-', 'S3' (both) or 'outside'."""
        if self.in_domain():
            return "N"
        d_iso = classify_line(self.D) == "isotropic"
        p_iso = classify_plane(self.P) == "isotropic"
        if d_iso and p_iso:
            return "S3"
        if d_iso:
            return "T+"
        if p_iso:
            return "T-"
        return "outside"


def twistor_projection(f: FlagPoint) -> tuple:
    """pi(D, P) = D^perp meet P."""
    a = perp_of_line(f.D)
    line = cross(a, f.P)
    if not is_nonzero(line):
        if classify_line(f.D) == "isotropic" and proportional(f.D, perp_of_plane(f.P)):
            return f.D
        raise DomainError("D^perp meet P is not a line")
    return line


def real_structure(f: FlagPoint) -> FlagPoint:
    """tau(D, P) = (P^perp, D^perp)."""
    return FlagPoint(perp_of_plane(f.P), perp_of_line(f.D))


@dataclass(frozen=True)
class CurveParam:
    d: tuple
    p: tuple

    def __post_init__(self):
        object.__setattr__(self, "d", vec(self.d))
        object.__setattr__(self, "p", vec(self.p))
        if not is_nonzero(self.d) or not is_nonzero(self.p):
            raise DomainError("curve parameters must be nonzero")

    @property
    def nodal(self) -> bool:
        return not pair(self.p, self.d)


def _point_on_line(b1, b2, t):
    if t is None:  # t = infinity
        return b2
    t = GaussRat.coerce(t)
    return tuple(b1[i] + t * b2[i] for i in range(3))


def curve_family(c: CurveParam, t, branch: str | None = None) -> FlagPoint | None:
    """A point of C(d, p) at parameter ``t`` (``None`` is the point at infinity).

    Smooth case: D = b1 + t b2 runs over p and P = D + d; returns ``None`` at the
    removable parameter D = d. Nodal case: ``branch='D'`` gives (D, p), and
    ``branch='P'`` gives (d, P) with P running over the planes through d.
    """
    b1, b2 = plane_basis(c.p)
    if not c.nodal:
        D = _point_on_line(b1, b2, t)
        P = cross(D, c.d)
        if not is_nonzero(P):
            return None
        return FlagPoint(D, P)
    if branch == "D":
        return FlagPoint(_point_on_line(b1, b2, t), c.p)
    if branch == "P":
        q1, q2 = plane_basis(c.d)  # covectors killing d
        return FlagPoint(c.d, _point_on_line(q1, q2, t))
    raise ValueError("nodal curves need branch='D' or branch='P'")


def node(c: CurveParam) -> FlagPoint:
    if not c.nodal:
        raise DomainError("curve is smooth")
    return FlagPoint(c.d, c.p)


def _dist2(a, b) -> Fraction:
    """Squared distance of ``a`` to the limit ``b`` in the affine chart of ``b``."""
    k = max(i for i in range(3) if b[i])
    if not a[k]:
        raise DomainError("point outside the affine chart of the limit")
    a = tuple(x / a[k] for x in a)
    b = tuple(x / b[k] for x in b)
    return sum((x - y).norm2() for x, y in zip(a, b))


def hausdorff_check(c: CurveParam, w, samples: Sequence, eps=(Fraction(1, 2), Fraction(1, 4), Fraction(1, 8))):
    """Squared distances from nodal-branch points to matching points of C(d + eps w, p).

    Branch 'D' points (D, p) are matched with (D, D + d_eps); branch 'P' points
    (d, d x w + mu b x d) are matched with D = d + eps mu b. Returns per-eps
    maximum squared distances and successive ratios (4 means linear decay).
    """
    if not c.nodal:
        raise DomainError("Hausdorff check needs a nodal curve")
    w = vec(w)
    if not pair(c.p, w):
        raise DomainError("w must leave the plane p")
    b1, b2 = plane_basis(c.p)
    b = b2 if proportional(b1, c.d) else b1
    out = []
    for e in eps:
        e = GaussRat.coerce(e)
        de = tuple(c.d[i] + e * w[i] for i in range(3))
        worst = Fraction(0)
        for t in samples:
            D = _point_on_line(b1, b2, t)
            if proportional(D, c.d):
                continue
            approx = FlagPoint(D, cross(D, de))
            worst = max(worst, _dist2(approx.D, D) + _dist2(approx.P, c.p))
            mu = GaussRat.coerce(t)
            target_P = tuple(x + mu * y for x, y in zip(cross(c.d, w), cross(b, c.d)))
            Dm = tuple(c.d[i] + e * mu * b[i] for i in range(3))
            approx2 = FlagPoint(Dm, cross(Dm, de))
            worst = max(worst, _dist2(approx2.D, c.d) + _dist2(approx2.P, target_P))
        out.append(worst)
    ratios = [out[k] / out[k + 1] if out[k + 1] else None for k in range(len(out) - 1)]
    return out, ratios


# ------------------------------------------------------------------ contact
def contact_form(f: FlagPoint, vdot) -> GaussRat:
    """theta(vdot) = P . vdot for a tangent vector moving the D-vector by ``vdot``."""
    return pair(f.P, vec(vdot))


def fiber_tangent(f: FlagPoint) -> tuple:
    """A tangent direction of the pi-fiber: D moving inside pi(f)^perp."""
    ell = twistor_projection(f)
    b1, b2 = plane_basis(perp_of_line(ell))
    return b2 if proportional(b1, f.D) else b1


def contact_transverse(f: FlagPoint) -> bool:
    """Exact rank test: the fiber tangent is not in the contact hyperplane."""
    ell = twistor_projection(f)
    vdot = fiber_tangent(f)
    return bool(det3(f.D, ell, vdot)) and bool(contact_form(f, vdot))


def random_vector(rng: random.Random, height: int = 3) -> tuple:
    while True:
        v = tuple(GaussRat(rng.randint(-height, height), rng.randint(-height, height)) for _ in range(3))
        if is_nonzero(v):
            return v


def random_flag(rng: random.Random, height: int = 3, domain: bool = True) -> FlagPoint:
    """Random flag, by rejection inside the twistor domain when ``domain``."""
    while True:
        D = random_vector(rng, height)
        w = random_vector(rng, height)
        P = cross(D, w)
        if not is_nonzero(P):
            continue
        f = FlagPoint(D, P)
        if not domain or f.in_domain():
            return f


def random_isotropic(rng: random.Random, height: int = 3) -> tuple:
    """Isotropic vector (1, z2, z3) from a rational point of the unit 3-sphere."""
    while True:
        y = [Fraction(rng.randint(-height, height), rng.randint(1, height)) for _ in range(3)]
        n = sum(c * c for c in y)
        q = 1 + n
        s = [2 * y[0] / q, 2 * y[1] / q, 2 * y[2] / q, (n - 1) / q]
        v = vec(1, GaussRat(s[0], s[1]), GaussRat(s[2], s[3]))
        if classify_line(v) == "isotropic":
            return v


def random_boundary_flag(rng: random.Random, side: str, height: int = 3) -> FlagPoint:
    """Random flag on T+ (isotropic D), T- (isotropic P) or S3 (D = P^perp isotropic)."""
    D = random_isotropic(rng, height)
    if side == "S3":
        return FlagPoint(D, perp_of_line(D))
    if side == "T-":
        P = perp_of_line(D)  # D^perp is an isotropic plane
        b1, b2 = plane_basis(P)
        while True:
            c = GaussRat(rng.randint(-height, height), rng.randint(-height, height))
            f = FlagPoint(tuple(x + c * y for x, y in zip(b1, b2)), P)
            if f.component() == "T-":
                return f
    if side != "T+":
        raise ValueError("side must be 'T+', 'T-' or 'S3'")
    while True:
        P = cross(D, random_vector(rng, height))
        if is_nonzero(P) and classify_plane(P) != "isotropic":
            return FlagPoint(D, P)


# ----------------------------------------------------------- fiber conics
@dataclass(frozen=True)
class FiberConic:
    """The conic x a^2 + b c = 0 in coordinates (a, b, c) of a eta + b theta + c thetabar."""

    x: Fraction

    @property
    def matrix(self):
        h = Fraction(1, 2)
        return [[Fraction(self.x), 0, 0], [0, 0, h], [0, h, 0]]

    def value(self, a, b, c) -> GaussRat:
        a, b, c = (GaussRat.coerce(t) for t in (a, b, c))
        return a * a * self.x + b * c

    def contains(self, a, b, c) -> bool:
        return not self.value(a, b, c)

    def discriminant(self) -> Fraction:
        return -Fraction(self.x) / 4

    def is_smooth(self) -> bool:
        return self.discriminant() != 0

    def point(self, t) -> tuple:
        """Rational parametrization (t, 1, -x t^2)."""
        t = GaussRat.coerce(t)
        return (t, GaussRat.coerce(1), -t * t * self.x)

    def components(self):
        """For x = 0 the two lines b = 0 and c = 0, as covectors on (a, b, c)."""
        if self.is_smooth():
            return None
        return [(0, 1, 0), (0, 0, 1)]


def conformal_fiber_curve(x) -> FiberConic:
    return FiberConic(Fraction(x))
