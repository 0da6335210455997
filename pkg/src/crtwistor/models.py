"""Explicit models: the Bergmann metric, Heisenberg CR data and the asymptotic metric."""
from __future__ import annotations

import json
import os
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import ConfigError, DomainError, PoleError
from .forms import Form
from .symalg import GaussRat, MPoly, RatFunc
from .symalg.upoly import signature as sturm_signature
from .tensor import Chart, MetricField, adjugate, det

BALL = ("x1", "x2", "x3", "x4")
CR = ("s", "u", "v")  # s is the real Heisenberg coordinate sigma
ASYM = ("x", "s", "u", "v")
DEFAULT_MAX_DEGREE = 4


def max_degree() -> int:
    raw = os.environ.get("CRTWISTOR_MAX_DEGREE")
    if raw is None:
        return DEFAULT_MAX_DEGREE
    try:
        val = int(raw)
    except ValueError as exc:
        raise ConfigError(f"CRTWISTOR_MAX_DEGREE must be an integer, got {raw!r}") from exc
    if val < 2:
        raise ConfigError("CRTWISTOR_MAX_DEGREE must be at least 2")
    return val


# ------------------------------------------------------------------ ball
def bergmann_metric() -> MetricField:
    """Bergmann metric of the unit ball in C^2 with complex coordinates x1+ix2, x3+ix4."""
    X = [RatFunc.var(BALL, n) for n in BALL]
    r2 = X[0] * X[0] + X[1] * X[1] + X[2] * X[2] + X[3] * X[3]
    a = 1 / (1 - r2)
    a2 = a * a
    A = X
    B = [-X[1], X[0], -X[3], X[2]]  # x1 dx2 - x2 dx1 + x3 dx4 - x4 dx3
    g = [[(a if i == j else 0) + (A[i] * A[j] + B[i] * B[j]) * a2 for j in range(4)] for i in range(4)]
    g = [[c if isinstance(c, RatFunc) else RatFunc.const(BALL, c) for c in row] for row in g]
    return MetricField(Chart(BALL), g)


def bergmann_numeric(p):
    """The same metric as a plain function of a numeric point (for float oracles)."""
    x1, x2, x3, x4 = p
    r2 = x1 * x1 + x2 * x2 + x3 * x3 + x4 * x4
    a = 1 / (1 - r2)
    A = [x1, x2, x3, x4]
    B = [-x2, x1, -x4, x3]
    return [[(a if i == j else 0) + (A[i] * A[j] + B[i] * B[j]) * a * a for j in range(4)] for i in range(4)]


def evaluate_matrix(g: MetricField, point: Mapping) -> list:
    return [[c.eval(point) for c in row] for row in g.g]


def real_matrix(m) -> list:
    out = []
    for row in m:
        r = []
        for c in row:
            c = GaussRat.coerce(c)
            if not c.is_real():
                raise DomainError("matrix has non-real entries")
            r.append(c.re)
        out.append(r)
    return out


def signature_at(g: MetricField, point: Mapping) -> tuple[int, int]:
    """Exact ``(positive, negative)`` counts of a real metric at a rational point."""
    try:
        m = real_matrix(evaluate_matrix(g, point))
    except PoleError:
        raise DomainError("metric has a pole at the point") from None
    p, n, z = sturm_signature(m)
    if z:
        raise DomainError("metric is degenerate at the point")
    return p, n


# -------------------------------------------------------------- CR data
def reality_poly(p):
    """Conjugate coefficients and swap u, v (the polynomial of tau-bar)."""
    if isinstance(p, RatFunc):
        return RatFunc._make(p.vars, reality_poly(p.num), {reality_poly(f): k for f, k in p.factors.items()})
    q = p.conj()
    if "u" in q.vars and "v" in q.vars:
        i, j = q.vars.index("u"), q.vars.index("v")

        def sw(e):
            e = list(e)
            e[i], e[j] = e[j], e[i]
            return tuple(e)

        return MPoly(q.vars, {sw(e): c for e, c in q.terms()})
    return q


def reality_form(f: Form) -> Form:
    """Induced action of the real structure on a form over (s, u, v)."""
    swap = {0: 0, 1: 2, 2: 1}
    return Form(f.coords, f.degree, {tuple(swap[i] for i in k): reality_poly(c) for k, c in f.comps.items()})


@dataclass(frozen=True)
class RealStructure:
    """The involution tau(s, u, v) = (conj s, conj v, conj u)."""

    def __call__(self, pt):
        s, u, v = (GaussRat.coerce(c) for c in pt)
        return (s.conj(), v.conj(), u.conj())

    def is_fixed(self, pt) -> bool:
        return tuple(GaussRat.coerce(c) for c in pt) == self(pt)

    def on_form(self, f: Form) -> Form:
        return reality_form(f)


TAU = RealStructure()


def _rf(c) -> RatFunc:
    if isinstance(c, RatFunc):
        return c.extend(CR) if set(c.vars) <= set(CR) else c
    if isinstance(c, MPoly):
        return RatFunc.from_poly(c.extend(CR))
    return RatFunc.const(CR, c)


@dataclass
class CRData:
    eta: Form
    theta: Form
    thetabar: Form
    name: str = "cr"

    @property
    def coords(self):
        return self.eta.coords

    def coframe_matrix(self):
        z = RatFunc.const(self.eta.comps[next(iter(self.eta.comps))].vars, 0)
        return [[f.coeff_or(z, i) for i in range(3)] for f in (self.eta, self.theta, self.thetabar)]

    def contact_volume(self):
        return det(self.coframe_matrix())

    def dual_frame(self):
        """Vectors (R, xi, xibar) dual to (eta, theta, thetabar)."""
        m = self.coframe_matrix()
        d = det(m)
        if d.is_zero():
            raise DomainError("coframe is degenerate")
        adj = adjugate(m)
        di = d.inverse()
        inv = [[adj[i][j] * di for j in range(3)] for i in range(3)]
        return [[inv[i][k] for i in range(3)] for k in range(3)]

    def levi_factor(self):
        """``c = -i deta(xi, xibar)``, so ``gamma = c (theta*thetabar + thetabar*theta)``."""
        _, xi, xib = self.dual_frame()
        val = self.eta.d().apply(xi, xib)
        z = RatFunc.const(self.coframe_matrix()[0][0].vars, 0)
        return (val if val is not None else z) * GaussRat(0, -1)

    def is_contact(self) -> bool:
        return not (self.eta ^ self.eta.d()).is_zero()

    def pseudoconvex_at(self, point: Mapping) -> bool:
        c = self.levi_factor().eval(point)
        return c.is_real() and c.re > 0

    def check(self, samples: int = 8, seed: int = 0) -> None:
        """Validate nondegeneracy, reality and pseudoconvexity at the origin and sample points."""
        if self.contact_volume().is_zero() or not self.is_contact():
            raise ConfigError("CR data is not contact")
        if reality_form(self.eta) != self.eta:
            raise ConfigError("eta is not real")
        if reality_form(self.theta) != self.thetabar:
            raise ConfigError("thetabar is not the conjugate of theta")
        rng = random.Random(seed)
        pts = [{"s": 0, "u": 0, "v": 0}]
        for _ in range(samples):
            a, b, s = (Fraction(rng.randint(-3, 3), 10) for _ in range(3))
            pts.append({"s": s, "u": GaussRat(a, b), "v": GaussRat(a, -b)})
        for p in pts:
            try:
                ok = self.pseudoconvex_at(p)
            except PoleError:
                continue
            if not ok:
                raise DomainError("Levi form not definite")


def heisenberg_cr() -> CRData:
    u, v = RatFunc.var(CR, "u"), RatFunc.var(CR, "v")
    half_i = GaussRat(0, Fraction(1, 2))
    eta = Form.one_form(CR, [RatFunc.const(CR, 1), v * (-half_i), u * half_i])
    theta = Form.one_form(CR, [RatFunc.const(CR, 0), RatFunc.const(CR, 1), RatFunc.const(CR, 0)])
    thetabar = Form.one_form(CR, [RatFunc.const(CR, 0), RatFunc.const(CR, 0), RatFunc.const(CR, 1)])
    return CRData(eta, theta, thetabar, "heisenberg")


def heisenberg_t10():
    """The T^{1,0} generator d_u + (i v / 2) d_s as components on (s, u, v)."""
    return [RatFunc.var(CR, "v") * GaussRat(0, Fraction(1, 2)), RatFunc.const(CR, 1), RatFunc.const(CR, 0)]


def perturbed_cr(theta_pert: Sequence, eta_pert: Sequence | None = None, name="perturbed") -> CRData:
    """Heisenberg data plus polynomial perturbations (components on ds, du, dv).

    ``thetabar`` is the conjugate of ``theta`` under the real structure; the
    eta perturbation must itself be real.
    """
    base = heisenberg_cr()
    tp = Form.one_form(CR, [_rf(c) for c in theta_pert])
    theta = base.theta + tp
    eta = base.eta
    if eta_pert is not None:
        eta = eta + Form.one_form(CR, [_rf(c) for c in eta_pert])
    return CRData(eta, theta, reality_form(theta), name)


def levi_metric(cr: CRData, samples: int = 8, seed: int = 0) -> list:
    """``gamma(X, Y) = deta(X, J Y)`` as a symmetric 3x3 array on (s, u, v)."""
    rng = random.Random(seed)
    pts = [{"s": 0, "u": 0, "v": 0}]
    for _ in range(samples):
        a, b, s = (Fraction(rng.randint(-3, 3), 10) for _ in range(3))
        pts.append({"s": s, "u": GaussRat(a, b), "v": GaussRat(a, -b)})
    for p in pts:
        try:
            if not cr.pseudoconvex_at(p):
                raise DomainError("Levi form not definite")
        except PoleError:
            continue
    c = cr.levi_factor()
    z = c * 0
    th = [cr.theta.coeff_or(z, i) for i in range(3)]
    tb = [cr.thetabar.coeff_or(z, i) for i in range(3)]
    return [[(th[i] * tb[j] + tb[i] * th[j]) * c for j in range(3)] for i in range(3)]


def levi_direct(cr: CRData, X, Y):
    """``deta(X, J Y)`` with J acting by +i on T^{1,0} and -i on T^{0,1}."""
    R, xi, xib = cr.dual_frame()
    z = RatFunc.const(xi[0].vars, 0)
    a = sum((cr.theta.coeff_or(z, k) * Y[k] for k in range(3)), z)
    b = sum((cr.thetabar.coeff_or(z, k) * Y[k] for k in range(3)), z)
    JY = [xi[k] * a * GaussRat(0, 1) - xib[k] * b * GaussRat(0, 1) for k in range(3)]
    val = cr.eta.d().apply(X, JY)
    return val if val is not None else z


def scale_cr(cr: CRData, f) -> CRData:
    """The conformal change eta -> f eta (the coframe theta is rescaled compatibly)."""
    f = _rf(f)
    return CRData(cr.eta.scale(f), cr.theta, cr.thetabar, cr.name + "-scaled")


# ------------------------------------------------------------- dilations
def parabolic_dilation(t, pt):
    t = Fraction(t) if not isinstance(t, GaussRat) else t
    if not t:
        raise DomainError("dilation parameter must be nonzero")
    if len(pt) == 2:
        s, u = pt
        return (t * t * s, t * u)
    if len(pt) == 3:
        x, s, u = pt
        return (t * x, t * t * s, t * u)
    raise ValueError("point must be (s, u) or (x, s, u)")


WEIGHTS = {"s": 2, "u": 1, "v": 1, "x": 2}


def pullback_cr(cr: CRData, t) -> CRData:
    """Pull back by the dilation, normalized so that eta/t^2 and theta/t.

    ``t`` is a nonzero rational or the name of a formal variable, in which case
    the coefficients become rational functions in that extra variable.
    """
    if isinstance(t, str):
        vars_ = CR + (t,)
        T = MPoly.var(vars_, t)
        images = {n: MPoly.var(vars_, n) * T ** WEIGHTS[n] for n in CR}
        scale = lambda k: RatFunc.from_poly(T) ** k
    else:
        t = Fraction(t)
        if not t:
            raise DomainError("dilation parameter must be nonzero")
        vars_ = CR
        images = {n: MPoly.var(vars_, n) * t ** WEIGHTS[n] for n in CR}
        scale = lambda k: RatFunc.const(vars_, t) ** k

    def pb(form: Form, w: int) -> Form:
        comps = {}
        for idx, c in form.comps.items():
            k = sum(WEIGHTS[CR[i]] for i in idx) - w
            comps[idx] = c.extend(vars_).subs(images, vars_) * scale(k)
        return Form(CR, form.degree, comps)

    return CRData(pb(cr.eta, 2), pb(cr.theta, 1), pb(cr.thetabar, 1), cr.name)


# ----------------------------------------------------------- asymptotics
def asymptotic_metric(cr: CRData) -> MetricField:
    """``(dx^2 + eta^2)/x^2 + gamma/x`` on the chart (x, s, u, v)."""
    gam = levi_metric(cr)
    X = RatFunc.var(ASYM, "x")
    ix = 1 / X
    ix2 = ix * ix
    z = RatFunc.const(ASYM, 0)
    eta = [cr.eta.coeff_or(z, i).extend(ASYM) for i in range(3)]
    g = [[z] * 4 for _ in range(4)]
    g[0][0] = ix2
    for i in range(3):
        for j in range(3):
            g[i + 1][j + 1] = eta[i] * eta[j] * ix2 + gam[i][j].extend(ASYM) * ix
    return MetricField(Chart(ASYM), g)


def siegel_oracle() -> MetricField:
    """Kaehler metric of -log(Im w - |z|^2) on the Siegel domain, in the chart (x, s, u, v).

    The holomorphic coordinates are w = s + i(x + u v) and z = u (v plays the
    role of the conjugate of u), so x is the defining function. The metric is
    ``sum h_{a b} (dz^a dzbar^b)`` with the same normalization as the ball.
    """
    x, s, u, v = (RatFunc.var(ASYM, n) for n in ASYM)
    i = GaussRat(0, 1)
    one, zero = RatFunc.const(ASYM, 1), RatFunc.const(ASYM, 0)
    dw = [one * i, one, v * i, u * i]
    dwb = [one * -i, one, v * -i, u * -i]
    dz = [zero, zero, one, zero]
    dzb = [zero, zero, zero, one]
    r2 = (x * x).inverse()
    h = [
        (r2 * Fraction(1, 4), dw, dwb),
        (r2 * u * -(i * 2).inverse(), dw, dzb),
        (r2 * v * (i * 2).inverse(), dz, dwb),
        (x.inverse() + u * v * r2, dz, dzb),
    ]
    g = [[zero] * 4 for _ in range(4)]
    for c, a, b in h:
        for j in range(4):
            for k in range(4):
                g[j][k] = g[j][k] + c * (a[j] * b[k] + b[j] * a[k]) * Fraction(1, 2)
    return MetricField(Chart(ASYM), g)


def oracle_in_model_chart() -> MetricField:
    """Four times the Siegel metric pulled back by (x, s, u, v) -> (2x, 2s, u, v)."""
    o = siegel_oracle()
    imgs = {"x": MPoly.var(ASYM, "x").scale(2), "s": MPoly.var(ASYM, "s").scale(2)}
    jac = [2, 2, 1, 1]
    g = [[o.g[j][k].subs(imgs) * (4 * jac[j] * jac[k]) for k in range(4)] for j in range(4)]
    return MetricField(Chart(ASYM), g)


def complex_to_real_jacobian():
    """Columns of d/dx, d/ds, d/da, d/db in the (x, s, u, v) frame, u = a+ib, v = a-ib."""
    i = GaussRat(0, 1)
    one, zero = GaussRat.coerce(1), GaussRat.coerce(0)
    return [
        [one, zero, zero, zero],
        [zero, one, zero, zero],
        [zero, zero, one, i],
        [zero, zero, one, -i],
    ]


def real_slice_values(g_values, jac=None):
    """``J^T g J`` for a numeric matrix in the complexified chart."""
    J = jac or complex_to_real_jacobian()
    n = len(J)
    return [
        [sum((J[k][a] * g_values[k][l] * J[l][b] for k in range(n) for l in range(n)), GaussRat.coerce(0)) for b in range(n)]
        for a in range(n)
    ]


# ------------------------------------------------------------ JSON input
def _poly_from_table(rows, label: str) -> MPoly:
    terms = {}
    for row in rows:
        try:
            exps, coeff = row
            e = tuple(int(k) for k in exps)
            c = GaussRat.parse(str(coeff))
        except Exception as exc:
            raise ConfigError(f"bad term {row!r} in {label}") from exc
        if len(e) != 3 or any(k < 0 for k in e):
            raise ConfigError(f"term {row!r} in {label} needs 3 nonnegative exponents (s, u, v)")
        terms[e] = terms[e] + c if e in terms else c
    return MPoly(CR, terms)


def _form_table(table, label: str, bound: int):
    if not isinstance(table, Mapping):
        raise ConfigError(f"{label} must be an object with keys ds, du, dv")
    out = []
    for key in ("ds", "du", "dv"):
        p = _poly_from_table(table.get(key, []), f"{label}.{key}")
        if p and p.min_degree() < 2:
            raise ConfigError(f"{label}.{key} must vanish to second order at the origin")
        if p and p.total_degree() > bound:
            raise ConfigError(f"{label}.{key} exceeds the degree bound {bound}")
        out.append(p)
    unknown = set(table) - {"ds", "du", "dv"}
    if unknown:
        raise ConfigError(f"unknown keys in {label}: {sorted(unknown)}")
    return out


def crdata_from_json(obj) -> CRData:
    """Load CR data from a perturbation table.

    Format: ``{"name": ..., "theta1": {"ds": [[[a,b,c], "coeff"], ...], "du": ..., "dv": ...},
    "eta": {...}, "theta1bar": {...}}``; missing tables mean no perturbation,
    and a missing ``theta1bar`` is derived from the real structure.
    """
    if isinstance(obj, str):
        obj = json.loads(obj)
    if not isinstance(obj, Mapping):
        raise ConfigError("CR data must be a JSON object")
    unknown = set(obj) - {"name", "theta1", "eta", "theta1bar"}
    if unknown:
        raise ConfigError(f"unknown keys: {sorted(unknown)}")
    bound = max_degree()
    tp = _form_table(obj.get("theta1", {}), "theta1", bound)
    ep = _form_table(obj["eta"], "eta", bound) if "eta" in obj else None
    cr = perturbed_cr(tp, ep, obj.get("name", "input"))
    if "theta1bar" in obj:
        tb = _form_table(obj["theta1bar"], "theta1bar", bound)
        given = heisenberg_cr().thetabar + Form.one_form(CR, [_rf(c) for c in tb])
        if given != cr.thetabar:
            raise ConfigError("theta1bar is not the conjugate of theta1")
    cr.check()
    return cr


def crdata_to_json(theta_pert, eta_pert=None, name="perturbed") -> dict:
    def table(ps):
        return {k: [[list(e), str(c)] for e, c in p.terms()] for k, p in zip(("ds", "du", "dv"), ps) if p}

    out = {"name": name, "theta1": table(theta_pert)}
    if eta_pert is not None:
        out["eta"] = table(eta_pert)
    return out


def random_perturbation(rng: random.Random, degree: int = 3, terms: int = 3, scale: int = 3):
    """Random O_2 polynomial perturbation of theta (components on ds, du, dv)."""
    comps = [dict(), dict(), dict()]
    for _ in range(terms):
        k = rng.randrange(3)
        d = rng.randint(2, degree)
        a = rng.randint(0, d)
        b = rng.randint(0, d - a)
        e = (a, b, d - a - b)
        c = GaussRat(Fraction(rng.randint(-scale, scale), rng.randint(1, scale)),
                     Fraction(rng.randint(-scale, scale), rng.randint(1, scale)))
        comps[k][e] = c
    return [MPoly(CR, c) for c in comps]
