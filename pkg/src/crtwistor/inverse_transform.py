"""From the nodal family back to the metric: Liouville forms, leaves and the quadric.

Charts used here:

* ``(s, u, v, zp)``: the CR chart with the fibre coordinate of the positive
  Liouville form ``eta + zp theta``; ``(s, u, v, zm)`` is its mirror for
  ``eta + zm thetabar``.
* ``(sp, up, zp)`` and ``(sm, vm, zm)``: leaf charts in which the holomorphic
  contact form is ``dsp + zp dup`` (resp. ``dsm + zm dvm``).

Quantities graded by ``ell Theta`` are carried as truncated series in a formal
square root ``q`` (``q**2 = ell Theta``), so that half-integer weights stay exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Mapping, Sequence

from .errors import DomainError
from .forms import Form
from .models import CR, CRData, heisenberg_cr, asymptotic_metric
from .nodal_curves import LSection, check_compatibility, standard_basis
from .symalg import GaussRat, INF, MPoly, RatFunc, TSeries, expand

I = GaussRat(0, 1)
HALF = Fraction(1, 2)
PLUS_CHART = CR + ("zp",)
MINUS_CHART = CR + ("zm",)
LEAF_PLUS = ("sp", "up", "zp")
LEAF_MINUS = ("sm", "vm", "zm")


def _fibre(branch: str) -> str:
    if branch not in ("+", "-"):
        raise ValueError("branch must be '+' or '-'")
    return "zp" if branch == "+" else "zm"


def _chart(branch: str):
    return PLUS_CHART if branch == "+" else MINUS_CHART


def _lift(form: Form, chart) -> Form:
    return Form(chart, form.degree, {k: c.extend(chart) for k, c in form.comps.items()})


def _lift_vec(vec, chart) -> list:
    return [c.extend(chart) for c in vec] + [RatFunc.const(chart, 0)]


def _val(x, chart):
    return RatFunc.const(chart, 0) if x is None else x


# --------------------------------------------------------------- Liouville
@dataclass
class Liouville:
    branch: str
    chart: tuple
    lam: Form
    dlam: Form

    def restrict_zero_section(self) -> Form:
        """``lam`` with the fibre coordinate set to 0, as a form on the CR chart."""
        z = _fibre(self.branch)
        comps = {}
        for idx, c in self.lam.comps.items():
            if 3 in idx:
                continue
            comps[idx] = c.subs({z: 0}, self.chart)
        return Form(self.chart, 1, comps)


def liouville(cr: CRData, branch: str = "+") -> Liouville:
    """``lam = eta + z theta`` (or ``eta + z thetabar`` on the mirror side) and ``d lam``."""
    z = _fibre(branch)
    chart = _chart(branch)
    eta = _lift(cr.eta, chart)
    th = _lift(cr.theta if branch == "+" else cr.thetabar, chart)
    Z = RatFunc.var(chart, z)
    lam = eta + th.scale(Z)
    lam_dl = Liouville(branch, chart, lam, lam.d())
    if lam_dl.restrict_zero_section() != eta:
        raise DomainError("Liouville form does not restrict to eta")
    return lam_dl


@dataclass
class HorizontalField:
    """The lifted field ``X = V + c d_z`` with ``i_X d lam = mu lam``."""

    branch: str
    chart: tuple
    components: list
    mu: RatFunc

    def residual(self, lv: Liouville) -> Form:
        return lv.dlam.interior(self.components) - lv.lam.scale(self.mu)


def horizontal_vector(cr: CRData, branch: str = "+") -> HorizontalField:
    """Lift of the (0,1) field (positive side) or (1,0) field (mirror) to the characteristic direction."""
    z = _fibre(branch)
    chart = _chart(branch)
    R, xi, xib = cr.dual_frame()
    base = xib if branch == "+" else xi
    other = xi if branch == "+" else xib
    V = _lift_vec(base, chart)
    Z = RatFunc.var(chart, z)
    th = _lift(cr.theta if branch == "+" else cr.thetabar, chart)
    two = _lift(cr.eta, chart).d() + th.d().scale(Z)
    w = two.interior(V)
    A = _val(w.apply(_lift_vec(R, chart)), chart)
    B = _val(w.apply(_lift_vec(other, chart)), chart)
    C = _val(w.apply(V), chart)
    if not C.is_zero():
        raise DomainError("contracted form has a component along the conjugate coframe")
    c = A * Z - B
    comps = V[:3] + [c]
    field = HorizontalField(branch, chart, comps, A)
    if not field.residual(liouville(cr, branch)).is_zero():
        raise DomainError("lifted field is not characteristic")
    return field


def model_horizontal(branch: str = "+") -> list:
    """Closed form on the Heisenberg group: d_v + (u/2i) d_s + i d_zp, or its mirror."""
    chart = _chart(branch)
    one, zero = RatFunc.const(chart, 1), RatFunc.const(chart, 0)
    if branch == "+":
        u = RatFunc.var(chart, "u")
        return [u * (I.inverse() * HALF), zero, one, RatFunc.const(chart, I)]
    v = RatFunc.var(chart, "v")
    return [v * (I * HALF), one, zero, RatFunc.const(chart, -I)]


def order_of(f: RatFunc) -> float:
    """Vanishing order at the origin (``inf`` for zero)."""
    return INF if f.is_zero() else f.order_at_origin()


# ------------------------------------------------------------------ leaves
def taylor(f: RatFunc, degree: int) -> MPoly:
    """Taylor polynomial of total degree ``degree`` at the origin."""
    if f.is_polynomial():
        return f.num.truncate_degree(degree)
    h = "_h"
    vars_ = f.vars + (h,)
    H = MPoly.var(vars_, h)
    scaled = f.extend(vars_).subs({n: MPoly.var(vars_, n) * H for n in f.vars}, vars_)
    return expand(scaled, h, degree, f.vars).at(1)


def _apply_field(field, f: RatFunc, chart) -> RatFunc:
    out = RatFunc.const(chart, 0)
    for comp, name in zip(field, chart):
        if comp.is_zero():
            continue
        d = f.diff(name)
        if not d.is_zero():
            out = out + comp * d
    return out


def _to_cr(f: RatFunc, z: str) -> RatFunc:
    """Restrict to the zero section ``z = 0`` as a function on the CR chart."""
    images = {n: MPoly.var(CR, n) for n in CR}
    images[z] = MPoly.zero(CR)
    return f.subs(images, CR)


@dataclass
class LeafEmbedding:
    """Images of the leaf coordinates as polynomials on the CR chart."""

    branch: str
    coords: tuple
    images: dict
    exact: bool
    order: int

    def at(self, point: Sequence) -> tuple:
        pt = dict(zip(CR, point))
        return tuple(self.images[c].eval(pt) for c in self.coords)

    def pullback(self, form: Form) -> Form:
        return form.pullback(CR, {k: RatFunc.from_poly(v) for k, v in self.images.items()}, lambda c: c.subs(self.images, CR))


def leaf_embed(cr: CRData, branch: str = "+", order: int = 3) -> LeafEmbedding:
    """Flow from the zero section along the horizontal field until ``v = 0`` (``u = 0`` on the mirror).

    The flow is a Lie series truncated at total degree ``order``; it is exact
    when the series terminates on polynomial coefficients.
    """
    field = horizontal_vector(cr, branch)
    chart = field.chart
    stop = "v" if branch == "+" else "u"
    k = chart.index(stop)
    lead = field.components[k]
    if not lead.eval({n: 0 for n in chart}):
        raise DomainError("field is tangent to the stopping hypersurface")
    Y = [c / lead for c in field.components]
    z = _fibre(branch)
    keep = ("s", "u", z) if branch == "+" else ("s", "v", z)
    T = RatFunc.var(CR, stop) * -1
    images, exact = {}, True
    for name, target in zip(keep, LEAF_PLUS if branch == "+" else LEAF_MINUS):
        f = RatFunc.var(chart, name)
        acc = RatFunc.const(CR, 0)
        term = f
        terminated = False
        for j in range(order + 1):
            if term.is_zero():
                terminated = True
                break
            acc = acc + _to_cr(term, z) * T ** j * Fraction(1, factorial(j))
            term = _apply_field(Y, term, chart)
        terminated = terminated or term.is_zero()
        if terminated and acc.is_polynomial():
            images[target] = acc.num
        else:
            exact = False
            images[target] = taylor(acc, order)
    return LeafEmbedding(branch, LEAF_PLUS if branch == "+" else LEAF_MINUS, images, exact, order)


def model_leaf(branch: str = "+") -> dict:
    """Closed-form Heisenberg leaves (s + i uv/2, u, -i v) and (s - i uv/2, v, i u)."""
    s, u, v = (MPoly.var(CR, n) for n in CR)
    if branch == "+":
        return {"sp": s + u * v * (I * HALF), "up": u, "zp": v * -I}
    return {"sm": s - u * v * (I * HALF), "vm": v, "zm": u * I}


# ----------------------------------------------------------------- quadric
def upsilon(s: Sequence, t: Sequence) -> GaussRat:
    """Polarized discriminant of ``a + b z + c z^2``: ``2(a c' + a' c) - b b'``."""
    a, b, c = (GaussRat.coerce(x) for x in s)
    a2, b2, c2 = (GaussRat.coerce(x) for x in t)
    return (a * c2 + a2 * c) * 2 - b * b2


def section_on_smoothing(s: LSection, eps):
    """``a + b z_+ + c z_-`` on ``z_+ z_- = eps`` as the quadratic ``eps c + a z + b z^2``."""
    return (s.c * eps, s.a, s.b)


def _eps_series(x) -> TSeries:
    return TSeries("eps", (), {0: x}, INF)


def upsilon_nodal(s: LSection, t: LSection, theta: TSeries | None = None) -> TSeries:
    """``ell^2 Upsilon(s, t)`` as a series in ``L = ell Theta``, known through ``L^1``.

    ``theta`` is ``ell Theta`` as a series in ``eps`` with valuation one
    (default ``-eps``). Corrections to the quadric on the smoothing enter at
    ``eps^2``, so the result carries order one whatever the input precision.
    """
    if theta is None:
        theta = TSeries("eps", (), {1: -1}, 1)
    if theta.valuation() != 1:
        raise DomainError("ell Theta must vanish to first order along the family")
    epsv = TSeries.gen("eps", (), 1)
    ss = section_on_smoothing(s, epsv)
    tt = section_on_smoothing(t, epsv)
    a, b, c = (x if isinstance(x, TSeries) else _eps_series(x) for x in ss)
    a2, b2, c2 = (x if isinstance(x, TSeries) else _eps_series(x) for x in tt)
    val = ((a * c2 + a2 * c) * 2 - b * b2).truncate(1)
    th = theta.truncate(max(1, min(theta.order, 1)))
    inv = th.revert()
    inv = TSeries("L", (), dict(inv.coeffs), inv.order)
    out = TSeries("eps", (), dict(val.coeffs), val.order)
    res = TSeries("L", (), dict(out.coeffs), out.order).compose(inv)
    return res.truncate(1)


# ------------------------------------------------------- contact two-form
def _branch_vector(br, leaf):
    """Components of ``a d_u + b d_s`` (``a`` with its pole) on a leaf chart."""
    z = RatFunc.var(leaf, leaf[2])
    a = RatFunc.const(leaf, br.residue) / z + sum((z ** k * c for k, c in enumerate(br.reg)), RatFunc.const(leaf, 0))
    b = sum((z ** k * c for k, c in enumerate(br.bpoly)), RatFunc.const(leaf, 0))
    return [b, a, RatFunc.const(leaf, 0)]


def leaf_contact_form(branch: str, perturbation: Form | None = None) -> Form:
    """``ds + z du`` on a leaf chart plus an optional term vanishing to second order on the curve."""
    leaf = LEAF_PLUS if branch == "+" else LEAF_MINUS
    z = RatFunc.var(leaf, leaf[2])
    eta = Form.one_form(leaf, [RatFunc.const(leaf, 1), z, RatFunc.const(leaf, 0)])
    if perturbation is not None:
        for c in perturbation.comps.values():
            p = c.num
            for e, _ in p.terms():
                if e[0] + e[1] < 2:
                    raise DomainError("perturbation must vanish to second order on the curve")
        eta = eta + perturbation
    return eta


def _on_curve(f: RatFunc, leaf) -> RatFunc:
    return f.subs({leaf[0]: 0, leaf[1]: 0}, leaf)


def _ell(branch: str, leaf) -> RatFunc:
    """The trivialization of L on each branch: dz/(i z) on C+ and -dz/(i z) on C-."""
    z = RatFunc.var(leaf, leaf[2])
    return z * I if branch == "+" else z * -I


@dataclass
class ThetaData:
    plus: GaussRat
    minus: GaussRat
    series: TSeries

    @property
    def transverse(self) -> bool:
        return bool(self.plus)


def theta_expansion(perturbation: Mapping[str, Form] | None = None) -> ThetaData:
    """``d(ell Theta)/d eps`` from both branches as ``d eta^c (s0, +-i z d_z)``."""
    perturbation = perturbation or {}
    (s0, *_), _ = standard_basis()
    vals = {}
    for branch, br in (("+", s0.plus), ("-", s0.minus)):
        leaf = LEAF_PLUS if branch == "+" else LEAF_MINUS
        deta = leaf_contact_form(branch, perturbation.get(branch)).d()
        zero = RatFunc.const(leaf, 0)
        euler = [zero, zero, _ell(branch, leaf)]
        val = _on_curve(_val(deta.apply(_branch_vector(br, leaf), euler), leaf), leaf)
        if not val.is_constant():
            raise DomainError("derivative of ell Theta is not constant along the branch")
        vals[branch] = val.num.constant_value()
    if vals["+"] != vals["-"]:
        raise DomainError("branches disagree on the derivative of ell Theta")
    return ThetaData(vals["+"], vals["-"], TSeries("eps", (), {1: vals["+"]}, 1))


def node_two_forms(cr: CRData | None = None) -> dict:
    """``d eta^c`` on each leaf pulled back to the CR chart along the leaf embeddings."""
    cr = cr or heisenberg_cr()
    out = {}
    for branch in ("+", "-"):
        emb = leaf_embed(cr, branch)
        out[branch] = emb.pullback(leaf_contact_form(branch).d())
    return out


def contact_two_form_expansion(perturbation: Mapping[str, Form] | None = None) -> dict:
    """Coefficients of ``2 ell Theta d eta^c`` on ``s^a ^ s^b`` as sections ``a + b z_+ + c z_-``."""
    perturbation = perturbation or {}
    sections, _ = standard_basis()
    for s in sections:
        if not check_compatibility(s):
            raise DomainError(f"section {s.label} violates the residue relations")
    per_branch = {}
    for branch in ("+", "-"):
        leaf = LEAF_PLUS if branch == "+" else LEAF_MINUS
        eta = leaf_contact_form(branch, perturbation.get(branch))
        vol = eta.wedge(eta.d())
        zero = RatFunc.const(leaf, 0)
        dz = [zero, zero, RatFunc.const(leaf, 1)]
        ell = _ell(branch, leaf)
        vecs = [_branch_vector(s.plus if branch == "+" else s.minus, leaf) for s in sections]
        table = {}
        for i in range(4):
            for j in range(i + 1, 4):
                val = _on_curve(_val(vol.apply(vecs[i], vecs[j], dz), leaf), leaf) * ell * 2
                if not val.is_polynomial() or val.num.total_degree() > 1:
                    raise DomainError("coefficient is not affine in the branch coordinate")
                p = val.num
                table[(i, j)] = (p.coeff((0, 0, 0)), p.coeff((0, 0, 1)))
        per_branch[branch] = table
    out = {}
    for key in per_branch["+"]:
        (a1, b), (a2, c) = per_branch["+"][key], per_branch["-"][key]
        if a1 != a2:
            raise DomainError("branches disagree at the node")
        out[key] = LSection(a1, b, c)
    return out


EXPECTED_TABLE = {
    (0, 1): (1, 0, 0),
    (0, 2): (0, 1, 0),
    (1, 2): (0, -I, 0),
    (0, 3): (0, 0, 1),
    (1, 3): (0, 0, I),
    (2, 3): (0, 0, 0),
}


# ------------------------------------------------------ q-graded sections
def qs(coeffs: Mapping[int, object], order=INF) -> TSeries:
    return TSeries("q", (), dict(coeffs), order)


def qzero(order=INF) -> TSeries:
    return qs({}, order)


@dataclass(frozen=True)
class QSection:
    """An L-section ``a + b z_+ + c z_-`` with coefficients graded by ``q``."""

    a: TSeries
    b: TSeries
    c: TSeries

    @classmethod
    def of(cls, s: LSection, weight: int = 0, order=INF) -> "QSection":
        return cls(*(qs({weight: x}, order) for x in (s.a, s.b, s.c)))

    def valuation(self):
        return min(x.valuation() for x in (self.a, self.b, self.c))


def upsilon_q(s: QSection, t: QSection) -> TSeries:
    """``ell^2 Upsilon`` with ``L = q^2`` and the O(L^2) remainder tracked bilinearly."""
    q2 = qs({2: 1})
    val = -(s.a * t.a) - q2 * (s.b * t.c + t.b * s.c) * 2
    return val.truncate(3 + s.valuation() + t.valuation())


def w_basis() -> list:
    """w1 = L, w2 = (z_+ + z_-)/2 sqrt(L), w3 = (z_+ - z_-)/(2i) sqrt(L)."""
    h = HALF
    j = (I * 2).inverse()
    return [
        QSection(qs({2: 1}), qzero(), qzero()),
        QSection(qzero(), qs({1: h}), qs({1: h})),
        QSection(qzero(), qs({1: j}), qs({1: -j})),
    ]


def gram_matrix() -> list:
    """``L^-2 ell^2 Upsilon(w_i, w_j)`` as q-series."""
    w = w_basis()
    inv = qs({-4: 1})
    return [[upsilon_q(a, b) * inv for b in w] for a in w]


PAIRS4 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


@dataclass
class TwoForm:
    """A 2-form on a four-dimensional coframe with q-series coefficients."""

    comps: dict  # (i, j) with i < j -> TSeries

    def coeff(self, i, j) -> TSeries:
        if i < j:
            return self.comps[(i, j)]
        return -self.comps[(j, i)]

    @property
    def order(self):
        return min(c.order for c in self.comps.values())

    def valuation(self):
        return min(c.valuation() for c in self.comps.values())

    def wedge(self, o: "TwoForm") -> TSeries:
        """Coefficient of ``e0 ^ e1 ^ e2 ^ e3`` in ``self ^ o``."""
        c, d = self.coeff, o.coeff
        return (c(0, 1) * d(2, 3) - c(0, 2) * d(1, 3) + c(0, 3) * d(1, 2)
                + c(1, 2) * d(0, 3) - c(1, 3) * d(0, 2) + c(2, 3) * d(0, 1))

    def change_coframe(self, M) -> "TwoForm":
        """Rewrite in a new coframe ``e`` where ``old^a = sum_k M[a][k] e^k``."""
        out = {}
        for k, l in PAIRS4:
            acc = qzero(self.order)
            for (a, b), w in self.comps.items():
                f = M[a][k] * M[b][l] - M[a][l] * M[b][k]
                if f:
                    acc = acc + w * f
            out[(k, l)] = acc
        return TwoForm(out)

    def leading(self, through: int) -> dict:
        return {k: [(e, c.constant_value()) for e, c in v.items() if e <= through] for k, v in self.comps.items()}

    def __add__(self, o):
        return TwoForm({k: self.comps[k] + o.comps[k] for k in PAIRS4})

    def __sub__(self, o):
        return TwoForm({k: self.comps[k] - o.comps[k] for k in PAIRS4})


# from (s0, s1, s2, s3) to (s0, s1, alpha2, alpha3): s2 = (a2 + i a3)/2, s3 = (a2 - i a3)/2
TO_ALPHA = [
    [1, 0, 0, 0],
    [0, 1, 0, 0],
    [0, 0, GaussRat(HALF), I * HALF],
    [0, 0, GaussRat(HALF), -I * HALF],
]
TO_ALPHA = [[GaussRat.coerce(x) for x in row] for row in TO_ALPHA]


def omega_forms(table: Mapping | None = None) -> list:
    """``omega_i = 2 L^-2 ell^2 Upsilon(omega, w_i)`` on the coframe ``s^0..s^3``.

    ``omega`` is ``d eta^c`` read as ``L^-1`` times half the two-form table, the
    table itself being known modulo O(L).
    """
    table = table or contact_two_form_expansion()
    half = {k: QSection(*(qs({0: x * HALF}, 1) for x in (s.a, s.b, s.c))) for k, s in table.items()}
    scale = qs({-6: 2})
    out = []
    for w in w_basis():
        out.append(TwoForm({k: upsilon_q(half[k], w) * scale for k in PAIRS4}))
    return out


def reference_triple():
    """The expected triple in the coframe (s0, s1, alpha2, alpha3), leading weights only."""
    z = lambda order: qzero(order)
    w1 = {k: z(-3) for k in PAIRS4}
    w1[(0, 1)] = qs({-4: -1}, -3)
    w2 = {k: z(-2) for k in PAIRS4}
    w2[(0, 2)] = qs({-3: -1}, -2)
    w2[(1, 3)] = qs({-3: -1}, -2)
    w3 = {k: z(-2) for k in PAIRS4}
    w3[(0, 3)] = qs({-3: 1}, -2)
    w3[(1, 2)] = qs({-3: -1}, -2)
    return [TwoForm(w1), TwoForm(w2), TwoForm(w3)]


def same_through(a: TSeries, b: TSeries) -> bool:
    """Equality on the overlap of the known ranges."""
    n = min(a.order, b.order)
    return (a - b).truncate(n).is_zero()


# ------------------------------------------------------------ metric
def _monomial(t: TSeries):
    """``(coefficient, exponent)`` of a single-term q-series."""
    terms = [(k, c.constant_value()) for k, c in t.items()]
    if len(terms) != 1:
        raise DomainError("expected a single leading monomial")
    k, c = terms[0]
    return c, k


def _magnitude(t: TSeries) -> tuple:
    c, k = _monomial(t)
    try:
        return GaussRat.coerce(c.norm2()).sqrt(), k
    except ValueError:
        raise DomainError(f"|{c}| is irrational: no diagonal metric over Q(i)") from None


@dataclass
class CoframeMetric:
    """A symmetric matrix on a named coframe, entries Laurent polynomials in one variable."""

    coframe: tuple
    var: str
    matrix: list

    def entry(self, i, j) -> MPoly:
        return self.matrix[i][j]


def _diag_hodge(weights, form: TwoForm) -> TwoForm:
    """Hodge star of a diagonal metric with ``sqrt(mu_a) = weights[a]`` (single q-monomials)."""
    from .tensor import perm_sign

    out = {k: qzero(form.order) for k in PAIRS4}
    for a, b in PAIRS4:
        c, d = [k for k in range(4) if k not in (a, b)]
        f = weights[c] * weights[d] * (weights[a] * weights[b]).inverse() * perm_sign((a, b, c, d))
        out[(c, d)] = out[(c, d)] + form.comps[(a, b)] * f
    return TwoForm(out)


@dataclass
class Reconstruction:
    mu: list  # q-series, one per coframe direction
    omegas: list  # derived triple in the alpha coframe
    completed_omega1: TwoForm
    metric: CoframeMetric  # on (d L, eta, theta, thetabar), entries in L

    def anti_self_dual(self) -> list:
        w = [_sqrt_q(m) for m in self.mu]
        return [_diag_hodge(w, om) + om for om in [self.completed_omega1] + self.omegas[1:]]


def reconstruct_metric(omegas: list | None = None, dtheta=None) -> Reconstruction:
    """Diagonal metric whose anti-self-dual forms carry the coefficients of the omega triple.

    ``dtheta`` is ``d(ell Theta)/d eps`` (so ``s^0 = d(ell Theta) / dtheta``).
    """
    omegas = omegas or omega_forms()
    if dtheta is None:
        dtheta = theta_expansion().plus
    al = [o.change_coframe(TO_ALPHA) for o in omegas]
    P = {}
    P[(0, 1)] = _magnitude(al[0].comps[(0, 1)].truncate(al[0].valuation()))
    for k in ((0, 2), (1, 3)):
        P[k] = _magnitude(al[1].comps[k].truncate(al[1].valuation()))
    for k in ((0, 3), (1, 2)):
        P[k] = _magnitude(al[2].comps[k].truncate(al[2].valuation()))

    def q(k):
        c, e = P[k]
        return qs({e: c})

    if not (q((0, 2)) * q((1, 3)) - q((0, 3)) * q((1, 2))).is_zero():
        raise DomainError("omega coefficients admit no diagonal metric")
    mu = [
        q((0, 1)) * q((0, 2)) * q((1, 2)).inverse(),
        q((0, 1)) * q((1, 3)) * q((0, 3)).inverse(),
        q((0, 2)) * q((1, 2)) * q((0, 1)).inverse(),
        q((0, 3)) * q((1, 3)) * q((0, 1)).inverse(),
    ]
    if not (mu[0] - q((0, 1)) * q((0, 3)) * q((1, 3)).inverse()).is_zero():
        raise DomainError("inconsistent diagonal ansatz")
    # complete omega1 inside the anti-self-dual space of the diagonal metric
    w = [_sqrt_q(m) for m in mu]
    lead = TwoForm({k: al[0].comps[k].truncate(al[0].valuation()) for k in PAIRS4})
    lead = TwoForm({k: TSeries("q", (), dict(v.coeffs), INF) for k, v in lead.comps.items()})
    if any(not lead.comps[k].is_zero() for k in PAIRS4 if k != (0, 1)):
        raise DomainError("leading part of omega1 is not along s0 ^ s1")
    completed = lead - _diag_hodge(w, lead)
    # coframe (s0, s1, alpha2, alpha3) in terms of (dL, eta, theta, thetabar)
    E = [
        [GaussRat.coerce(dtheta).inverse(), 0, 0, 0],
        [0, 2, 0, 0],
        [0, 0, 1, 1],
        [0, 0, -I, I],
    ]
    E = [[GaussRat.coerce(x) for x in row] for row in E]
    g = [[MPoly.zero(("L",)) for _ in range(4)] for _ in range(4)]
    for a in range(4):
        muL = _to_L(mu[a])
        for i in range(4):
            for j in range(4):
                f = E[a][i] * E[a][j]
                if f:
                    g[i][j] = g[i][j] + muL.scale(f)
    return Reconstruction(mu, al, completed, CoframeMetric(("dL", "eta", "theta", "thetabar"), "L", g))


def _sqrt_q(t: TSeries) -> TSeries:
    c, k = _monomial(t)
    if k % 2:
        raise DomainError("odd weight has no square root in q")
    try:
        return qs({k // 2: c.sqrt()})
    except ValueError:
        raise DomainError(f"{c} has no square root in Q(i)") from None


def _to_L(t: TSeries) -> MPoly:
    out = MPoly.zero(("L",))
    for k, c in t.items():
        if k % 2:
            raise DomainError("odd power of q in the metric")
        out = out + MPoly.monomial(("L",), (k // 2,), c.constant_value())
    return out


def target_metric(cr: CRData | None = None) -> CoframeMetric:
    """``(dL^2 + 4 eta^2)/L^2 + 2 gamma/L`` on the coframe (dL, eta, theta, thetabar)."""
    cr = cr or heisenberg_cr()
    c = cr.levi_factor()
    if not c.is_constant():
        raise DomainError("target metric needs constant Levi factor")
    lev = c.num.constant_value()
    Lm2 = MPoly.monomial(("L",), (-2,), 1)
    Lm1 = MPoly.monomial(("L",), (-1,), 1)
    z = MPoly.zero(("L",))
    g = [[z] * 4 for _ in range(4)]
    g[0][0] = Lm2
    g[1][1] = Lm2.scale(4)
    g[2][3] = g[3][2] = Lm1.scale(lev * 2)
    return CoframeMetric(("dL", "eta", "theta", "thetabar"), "L", g)


def to_boundary_chart(m: CoframeMetric, cr: CRData | None = None) -> list:
    """Substitute ``L = 2x`` and expand on the coordinate basis of (x, s, u, v)."""
    from .models import ASYM

    cr = cr or heisenberg_cr()
    X = RatFunc.var(ASYM, "x")
    zero, one = RatFunc.const(ASYM, 0), RatFunc.const(ASYM, 1)
    # rows: dL = 2 dx, eta, theta, thetabar in the (dx, ds, du, dv) basis
    rows = [[one * 2, zero, zero, zero]]
    for f in (cr.eta, cr.theta, cr.thetabar):
        rows.append([zero] + [f.coeff_or(zero, i).extend(ASYM) for i in range(3)])
    ent = [[_L_at(m.matrix[i][j], X * 2) for j in range(4)] for i in range(4)]
    out = [[zero] * 4 for _ in range(4)]
    for i in range(4):
        for j in range(4):
            acc = zero
            for a in range(4):
                for b in range(4):
                    if ent[a][b].is_zero() or rows[a][i].is_zero() or rows[b][j].is_zero():
                        continue
                    acc = acc + rows[a][i] * ent[a][b] * rows[b][j]
            out[i][j] = acc
    return out


def _L_at(p: MPoly, val: RatFunc) -> RatFunc:
    acc = RatFunc.const(val.vars, 0)
    for e, c in p.terms():
        acc = acc + val ** e[0] * c
    return acc


def matches_asymptotic(m: CoframeMetric, cr: CRData | None = None) -> bool:
    cr = cr or heisenberg_cr()
    mine = to_boundary_chart(m, cr)
    ref = asymptotic_metric(cr).g
    return all(mine[i][j] == ref[i][j] for i in range(4) for j in range(4))
