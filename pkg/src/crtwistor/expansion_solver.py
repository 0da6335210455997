"""Formal solution of Ric = lam g, W^- = 0 near the boundary x = 0 of CR data.

Gauge and ansatz on the chart (x, s, u, v)::

    g = dx^2/x^2 + eta eta/x^2 + gamma/x
        + sum_{k=1..N} x^(k-2) (eta a_k + a_k eta) + x^(k-1) b_k

with ``a_k = a0 eta0 + a1 du + a2 dv`` and ``b_k`` a symmetric tensor on
(du, dv); ``eta0`` is the Heisenberg contact form. The six coefficient
functions per order are polynomials in (s, u, v).

Bookkeeping uses the parabolic dilation (x, s, u, v) -> (t^2 x, t^2 s, t u, t v):
the Heisenberg model is invariant, so the pulled-back metric is a series in
``t`` whose t^0 term is the model, and the linearized equations at t-order ``e``
only involve the model operator. ``e`` of a monomial ``p`` in slot ``(k, j)``
is ``2k + w_j + wt(p)`` with ``wt(s^a u^b v^c) = 2a + b + c``.

Equation rows are frame components (frame dual to dx, eta0, du, dv) and each
monomial of them; the x-weight of a row relative to the leading term is
``ceil(r)`` where ``2r = 2m + n_A + n_B`` for a component x^m in frame slot
(A, B) with n = (2, 2, 1, 1). The unknowns of order k are pinned by the rows
of weight k.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .errors import ConfigError, DomainError, NotAUnitError
from .models import ASYM, CR, CRData, complex_to_real_jacobian, heisenberg_cr, max_degree, real_slice_values
from .symalg import GaussRat, MPoly, RatFunc, TSeries
from .symalg.linalg import solve
from .symalg.upoly import signature as sturm_signature
from .tensor import PAIRS, Chart, MetricField, curvature, weyl_split

T = "t"
N2 = (2, 2, 1, 1)
SLOTS = ("a0", "a1", "a2", "buu", "buv", "bvv")
SLOT_WEIGHT = {"a0": 0, "a1": -1, "a2": -1, "buu": 0, "buv": 0, "bvv": 0}
DEFAULT_ORDER_BOUND = 3
I = GaussRat(0, 1)
HALF_I = GaussRat(0, Fraction(1, 2))


def _p(c) -> MPoly:
    return c if isinstance(c, MPoly) else MPoly.const(ASYM, c)


def _x(m: int) -> MPoly:
    return MPoly.monomial(ASYM, (m, 0, 0, 0))


def weight(exp) -> int:
    """Dilation weight of a monomial on (s, u, v)."""
    return 2 * exp[0] + exp[1] + exp[2]


def monomials(max_weight: int):
    """Exponents on (s, u, v) of weight at most ``max_weight``."""
    out = []
    for a in range(max_weight // 2 + 1):
        for b in range(max_weight - 2 * a + 1):
            for c in range(max_weight - 2 * a - b + 1):
                out.append((a, b, c))
    return out


def _exp4(e3) -> tuple:
    return (0,) + tuple(e3)


# ------------------------------------------------------------- model frame
def model_coframe():
    """Rows dx, eta0, du, dv on (dx, ds, du, dv)."""
    u, v = MPoly.var(ASYM, "u"), MPoly.var(ASYM, "v")
    one, z = _p(1), _p(0)
    return [
        [one, z, z, z],
        [z, one, v.scale(-HALF_I), u.scale(HALF_I)],
        [z, z, one, z],
        [z, z, z, one],
    ]


def model_frame():
    """Vectors dual to :func:`model_coframe`, as rows of components."""
    u, v = MPoly.var(ASYM, "u"), MPoly.var(ASYM, "v")
    one, z = _p(1), _p(0)
    return [
        [one, z, z, z],
        [z, one, z, z],
        [z, v.scale(HALF_I), one, z],
        [z, u.scale(-HALF_I), z, one],
    ]


def slot_tensor(k: int, slot: str, eta=None):
    """The symmetric tensor multiplying the slot function (x-power included).

    ``eta`` is a list of four components (default: the model contact form).
    """
    F = model_coframe()
    eta = eta if eta is not None else F[1]
    du, dv = F[2], F[3]

    def sym(a, b, c):
        return [[(a[i] * b[j] + b[i] * a[j]) * c for j in range(4)] for i in range(4)]

    if slot == "a0":
        return sym(eta, eta, _x(k - 2) * Fraction(1, 2))
    if slot == "a1":
        return sym(eta, du, _x(k - 2))
    if slot == "a2":
        return sym(eta, dv, _x(k - 2))
    if slot == "buu":
        return sym(du, du, _x(k - 1) * Fraction(1, 2))
    if slot == "buv":
        return sym(du, dv, _x(k - 1))
    if slot == "bvv":
        return sym(dv, dv, _x(k - 1) * Fraction(1, 2))
    raise ValueError(f"unknown slot {slot!r}")


# --------------------------------------------------------------- linear jets
class LinJet:
    """``base + sum lin[(tag, alpha)] * d^alpha f_tag`` to first order in the f's.

    The f's are functions of (s, u, v); ``alpha`` counts derivatives in that order.
    """

    __slots__ = ("base", "lin")
    DERIV = {"s": 0, "u": 1, "v": 2}

    def __init__(self, base: MPoly, lin: Mapping | None = None):
        self.base = base
        self.lin = dict(lin or {})

    def like(self, c) -> "LinJet":
        return LinJet(_p(c))

    def _co(self, o) -> "LinJet":
        return o if isinstance(o, LinJet) else LinJet(_p(o))

    def is_zero(self) -> bool:
        return not self.base and not self.lin

    def __bool__(self):
        return not self.is_zero()

    def __neg__(self):
        return LinJet(-self.base, {k: -c for k, c in self.lin.items()})

    def __add__(self, o):
        o = self._co(o)
        lin = dict(self.lin)
        for k, c in o.lin.items():
            s = lin[k] + c if k in lin else c
            if s:
                lin[k] = s
            else:
                lin.pop(k, None)
        return LinJet(self.base + o.base, lin)

    __radd__ = __add__

    def __sub__(self, o):
        return self + (-self._co(o))

    def __rsub__(self, o):
        return self._co(o) - self

    def __mul__(self, o):
        if isinstance(o, (int, Fraction, GaussRat)):
            if not o:
                return LinJet(MPoly.zero(ASYM))
            return LinJet(self.base.scale(o), {k: c.scale(o) for k, c in self.lin.items()})
        o = self._co(o)
        lin = {}
        for a, b in ((self, o), (o, self)):
            if not a.base:
                continue
            for k, c in b.lin.items():
                s = a.base * c
                if k in lin:
                    s = lin[k] + s
                if s:
                    lin[k] = s
                else:
                    lin.pop(k, None)
        return LinJet(self.base * o.base, lin)

    __rmul__ = __mul__

    def diff(self, name: str) -> "LinJet":
        lin: dict = {}

        def put(k, c):
            if not c:
                return
            s = lin[k] + c if k in lin else c
            if s:
                lin[k] = s
            else:
                lin.pop(k, None)

        for (tag, alpha), c in self.lin.items():
            put((tag, alpha), c.diff(name))
            if name in self.DERIV:
                a = list(alpha)
                a[self.DERIV[name]] += 1
                put((tag, tuple(a)), c)
        return LinJet(self.base.diff(name), lin)

    def inverse(self) -> "LinJet":
        if not self.base.is_unit():
            raise NotAUnitError("base of a linear jet must be a monomial")
        bi = self.base.unit_inverse()
        b2 = -(bi * bi)
        return LinJet(bi, {k: c * b2 for k, c in self.lin.items()})

    def root(self, r0: MPoly) -> "LinJet":
        """Square root whose base is ``r0`` (which must square to the base)."""
        if r0 * r0 != self.base:
            raise ValueError("r0 is not a root of the base")
        h = (r0.scale(2)).unit_inverse()
        return LinJet(r0, {k: c * h for k, c in self.lin.items()})


# ------------------------------------------------------------ frame rows
def _frame_einstein(get):
    """Frame components (A, B), A <= B, from a coordinate-component getter."""
    X = model_frame()
    out = {}
    for A in range(4):
        for B in range(A, 4):
            acc = MPoly.zero(ASYM)
            for i in range(4):
                if not X[A][i]:
                    continue
                for j in range(4):
                    if not X[B][j]:
                        continue
                    c = get(i, j)
                    if c:
                        acc = acc + X[A][i] * X[B][j] * c
            out[("E", A, B)] = acc
    return out


def _pair_matrices():
    X, F = model_frame(), model_coframe()
    Tm = [[X[A][i] * X[B][j] - X[A][j] * X[B][i] for (i, j) in PAIRS] for (A, B) in PAIRS]
    Ti = [[F[A][i] * F[B][j] - F[A][j] * F[B][i] for (A, B) in PAIRS] for (i, j) in PAIRS]
    return Tm, Ti


def _frame_weyl(get):
    """``T M T^-1`` on frame pairs for the operator with entries ``get(P, Q)``."""
    Tm, Ti = _pair_matrices()
    M = [[get(p, q) for q in range(6)] for p in range(6)]
    # left = T M
    left = []
    for P in range(6):
        row = []
        for q in range(6):
            acc = MPoly.zero(ASYM)
            for r in range(6):
                if Tm[P][r] and M[r][q]:
                    acc = acc + Tm[P][r] * M[r][q]
            row.append(acc)
        left.append(row)
    out = {}
    for P in range(6):
        for Q in range(6):
            acc = MPoly.zero(ASYM)
            for s in range(6):
                if left[P][s] and Ti[s][Q]:
                    acc = acc + left[P][s] * Ti[s][Q]
            out[("W", P, Q)] = acc
    return out


def _shift(comp) -> int:
    if comp[0] == "E":
        return N2[comp[1]] + N2[comp[2]]
    P, Q = PAIRS[comp[1]], PAIRS[comp[2]]
    return N2[P[0]] + N2[P[1]] - N2[Q[0]] - N2[Q[1]]


def row_weight(two_r: int) -> int:
    """Integer x-weight above the leading term of a row with relative order r."""
    return max(0, -(-two_r // 2))


def rows_of(frame: Mapping) -> dict:
    """``{(component, exponent): (coefficient, 2r)}`` for all nonzero monomials."""
    out = {}
    for comp, p in frame.items():
        sh = _shift(comp)
        for e, c in p.terms():
            out[(comp, e)] = (c, 2 * e[0] + sh)
    return out


# ---------------------------------------------------------- model operator
@dataclass
class ModelOperator:
    """Linearization of the residual at the model, for orders 1..N."""

    N: int
    lam: GaussRat
    coeffs: dict  # component -> {(tag, alpha): MPoly}
    _cols: dict = field(default_factory=dict)

    def column(self, k: int, slot: str, e3) -> dict:
        """Rows of the linearized residual for the unknown monomial ``e3`` in slot ``(k, slot)``."""
        key = (k, slot, tuple(e3))
        if key in self._cols:
            return self._cols[key]
        p = MPoly.monomial(CR, tuple(e3))
        frame = {}
        for comp, table in self.coeffs.items():
            acc = MPoly.zero(ASYM)
            for (tag, alpha), c in table.items():
                if tag != (k, slot):
                    continue
                q = p
                for name, n in zip(CR, alpha):
                    for _ in range(n):
                        q = q.diff(name)
                    if not q:
                        break
                if q:
                    acc = acc + c * q.extend(ASYM)
            if acc:
                frame[comp] = acc
        col = {rk: c for rk, (c, _) in rows_of(frame).items()}
        self._cols[key] = col
        return col


_OPERATORS: dict = {}


def model_operator(N: int, lam) -> ModelOperator:
    """Cached linearization of Ric - lam g and W^- at the model, orders 1..N."""
    key = (N, str(lam))
    if key in _OPERATORS:
        return _OPERATORS[key]
    g0 = _model_metric_polys()
    lin_entries = [[dict() for _ in range(4)] for _ in range(4)]
    for k in range(1, N + 1):
        for slot in SLOTS:
            S = slot_tensor(k, slot)
            for i in range(4):
                for j in range(4):
                    if S[i][j]:
                        lin_entries[i][j][((k, slot), (0, 0, 0))] = S[i][j]
    g = [[LinJet(g0[i][j], lin_entries[i][j]) for j in range(4)] for i in range(4)]
    mf = MetricField(Chart(ASYM), g)
    vol = mf.det().root(_x(-3).scale(-I))
    pack = curvature(mf, check_bianchi=False)
    W = weyl_split(mf, vol).minus
    res = [[pack.ricci[i][j] - g[i][j] * lam for j in range(4)] for i in range(4)]
    coeffs: dict = {}
    tags = {key for row in res for c in row for key in c.lin} | {key for row in W for c in row for key in c.lin}
    for tk in tags:
        fe = _frame_einstein(lambda i, j: res[i][j].lin.get(tk))
        fw = _frame_weyl(lambda p, q: W[p][q].lin.get(tk) or MPoly.zero(ASYM))
        for comp, c in itertools.chain(fe.items(), fw.items()):
            if c:
                coeffs.setdefault(comp, {})[tk] = c
    op = ModelOperator(N, GaussRat.coerce(lam), coeffs)
    _OPERATORS[key] = op
    return op


def _model_metric_polys():
    F = model_coframe()
    eta, du, dv = F[1], F[2], F[3]
    out = [[MPoly.zero(ASYM) for _ in range(4)] for _ in range(4)]
    out[0][0] = _x(-2)
    for i in range(4):
        for j in range(4):
            out[i][j] = out[i][j] + eta[i] * eta[j] * _x(-2) + (du[i] * dv[j] + dv[i] * du[j]) * _x(-1)
    return out


# ------------------------------------------------------------ CR as series
def _poly_of(rf) -> MPoly:
    if hasattr(rf, "is_polynomial"):
        if not rf.is_polynomial():
            raise ConfigError("the expansion solver needs polynomial CR data")
        return rf.num.extend(CR)
    return rf.extend(CR)


def _graded(p: MPoly, shift: int, order) -> TSeries:
    coeffs: dict = {}
    for e, c in p.terms():
        n = weight(e) + shift
        if n < 0:
            raise DomainError("CR data is not a perturbation of the Heisenberg model")
        m = MPoly.monomial(ASYM, _exp4(e), c)
        coeffs[n] = coeffs[n] + m if n in coeffs else m
    return TSeries(T, ASYM, coeffs, order)


@dataclass
class GradedCR:
    """eta / t^2 and theta / t pulled back by the dilation, as t-series."""

    eta: list
    theta: list
    thetabar: list
    levi: TSeries

    def gamma(self):
        c = self.levi
        return [[(self.theta[i] * self.thetabar[j] + self.thetabar[i] * self.theta[j]) * c for j in range(4)]
                for i in range(4)]


def graded_cr(cr: CRData, order: int) -> GradedCR:
    z = cr.eta.comps[next(iter(cr.eta.comps))] * 0
    W = (2, 1, 1)

    def comps(form, w):
        out = [TSeries(T, ASYM, {}, order)]
        for i in range(3):
            out.append(_graded(_poly_of(form.coeff_or(z, i)), W[i] - w, order))
        return out

    eta, th, tb = comps(cr.eta, 2), comps(cr.theta, 1), comps(cr.thetabar, 1)
    M = [eta[1:], th[1:], tb[1:]]
    from .tensor import adjugate, det

    d = det(M)
    if d.coeff(0) != MPoly.const(ASYM, 1) and not d.coeff(0).is_unit():
        raise DomainError("CR coframe degenerates at the origin")
    di = d.inverse()
    adj = adjugate(M)
    inv = [[adj[i][j] * di for j in range(3)] for i in range(3)]
    xi = [inv[i][1] for i in range(3)]
    xib = [inv[i][2] for i in range(3)]
    acc = TSeries(T, ASYM, {}, order)
    for i in range(3):
        for j in range(3):
            if i == j:
                continue
            dij = eta[1 + j].diff(CR[i]) - eta[1 + i].diff(CR[j])
            if dij:
                acc = acc + dij * xi[i] * xib[j]
    levi = acc * (-I)
    if levi.coeff(0) != MPoly.const(ASYM, 1):
        raise DomainError("Levi form at the origin differs from the Heisenberg normalization")
    return GradedCR(eta, th, tb, levi)


# ----------------------------------------------------------- series metric
@dataclass
class SeriesMetric:
    """The solver state: CR data, truncation and the slot coefficients.

    ``coeffs[(k, slot)]`` maps an (s, u, v) exponent to its value; unknowns
    that have not been solved are absent and count as zero.
    """

    cr: CRData
    N: int
    max_degree: int
    lam: GaussRat | None = None
    coeffs: dict = field(default_factory=dict)
    solved_orders: int = -1
    t_cap: int | None = None

    @property
    def t_order(self) -> int:
        top = 2 * self.N + self.max_degree
        return top if self.t_cap is None else min(top, self.t_cap)

    def unknowns(self, k: int | None = None) -> list:
        """``(k, slot, exponent, e)`` for every unknown monomial up to the t-order."""
        out = []
        for kk in range(1, self.N + 1) if k is None else ([k] if k >= 1 else []):
            for slot in SLOTS:
                top = self.t_order - 2 * kk - SLOT_WEIGHT[slot]
                for e3 in monomials(top):
                    out.append((kk, slot, e3, 2 * kk + SLOT_WEIGHT[slot] + weight(e3)))
        return out

    def slot_poly(self, k: int, slot: str) -> MPoly:
        tab = self.coeffs.get((k, slot), {})
        return MPoly(CR, {e: c for e, c in tab.items() if c})

    def series_metric(self, order: int | None = None, graded: GradedCR | None = None) -> MetricField:
        """The metric as a t-series (t = 1 recovers it) truncated at ``order``."""
        order = self.t_order if order is None else order
        gc = graded or graded_cr(self.cr, order)
        eta = gc.eta
        gam = gc.gamma()
        zero = TSeries(T, ASYM, {}, order)
        x2, x1 = TSeries(T, ASYM, {0: _x(-2)}), TSeries(T, ASYM, {0: _x(-1)})
        g = [[zero for _ in range(4)] for _ in range(4)]
        g[0][0] = zero + x2
        for i in range(1, 4):
            for j in range(1, 4):
                g[i][j] = eta[i] * eta[j] * x2 + gam[i][j] * x1
        for (k, slot), tab in self.coeffs.items():
            if k > self.N:
                continue
            parts: dict = {}
            for e3, c in tab.items():
                if not c:
                    continue
                n = 2 * k + SLOT_WEIGHT[slot] + weight(e3)
                m = MPoly.monomial(ASYM, _exp4(e3), c)
                parts[n] = parts[n] + m if n in parts else m
            if not parts:
                continue
            f = TSeries(T, ASYM, parts, order)
            S = _slot_series(k, slot, eta)
            for i in range(4):
                for j in range(4):
                    if S[i][j]:
                        g[i][j] = g[i][j] + f * S[i][j]
        return MetricField(Chart(ASYM), g)

    def metric_at(self, point: Mapping) -> list:
        """Numeric 4x4 matrix of the truncated metric at a point (complex chart)."""
        m = self.series_metric()
        return [[c.at(1).eval(point) for c in row] for row in m.g]

    def gauge_holds(self) -> bool:
        g = self.series_metric().g
        if g[0][0].at(1) != _x(-2):
            return False
        return all(g[0][j].is_zero() and g[j][0].is_zero() for j in range(1, 4))


def _slot_series(k, slot, eta):
    F = model_coframe()
    du = [TSeries(T, ASYM, {0: c}) for c in F[2]]
    dv = [TSeries(T, ASYM, {0: c}) for c in F[3]]

    def sym(a, b, c):
        return [[(a[i] * b[j] + b[i] * a[j]) * c for j in range(4)] for i in range(4)]

    x = lambda m: TSeries(T, ASYM, {0: _x(m)})
    table = {
        "a0": (eta, eta, x(k - 2) * Fraction(1, 2)),
        "a1": (eta, du, x(k - 2)),
        "a2": (eta, dv, x(k - 2)),
        "buu": (du, du, x(k - 1) * Fraction(1, 2)),
        "buv": (du, dv, x(k - 1)),
        "bvv": (dv, dv, x(k - 1) * Fraction(1, 2)),
    }
    return sym(*table[slot])


def ansatz(cr: CRData, N: int, degree: int | None = None) -> SeriesMetric:
    """Leading data from ``cr`` with every higher coefficient unknown."""
    if N < 0:
        raise ValueError("order must be nonnegative")
    graded_cr(cr, 0)  # Levi normalization and nondegeneracy at the origin
    return SeriesMetric(cr, N, max_degree() if degree is None else degree)


def clean_t_order(sm: SeriesMetric) -> int:
    """Largest t-order that unknowns beyond order N cannot reach.

    Data whose leading block has frame rows of negative weight (eta
    perturbations along du, dv) couples missing order N+1 unknowns, which start
    at t-order 2N+1, to rows of every weight once multiplied by that data.
    """
    top = 2 * sm.N + sm.max_degree
    lead = SeriesMetric(sm.cr, sm.N, sm.max_degree).series_metric(top).g
    for e in range(1, top + 1):
        rows = rows_of(_frame_einstein(lambda i, j: lead[i][j].coeff(e)))
        if any(r2 < 0 for _, r2 in rows.values()):
            return min(top, 2 * sm.N + e)
    return top


def calibrated_volume(m: MetricField):
    """``sqrt(det g)`` with leading term ``-i x^-3`` (the self-dual orientation)."""
    root = m.det().sqrt()
    lead = root.coeff(0)
    want = _x(-3).scale(-I)
    if lead == want:
        return root
    if lead == -want:
        return -root
    raise DomainError("metric is not a perturbation of the model")


def _q(rk) -> int:
    comp, e = rk
    return 2 * e[0] + _shift(comp)


def residual_rows(sm: SeriesMetric, lam, order: int | None = None, only: int | None = None,
                  with_metric: bool = False):
    """Rows of Ric - lam g and W^- for the current coefficients.

    Returns ``{e: {row: (coefficient, 2r)}}`` for the t-orders up to ``order``
    (or just ``only``), and the rows of g itself when ``with_metric`` (the
    column of an unknown Einstein constant).
    """
    order = sm.t_order if order is None else order
    m = sm.series_metric(order)
    pack = curvature(m, check_bianchi=False)
    W = weyl_split(m, calibrated_volume(m)).minus
    out, gout = {}, {}
    for e in (range(order + 1) if only is None else [only]):
        fe = _frame_einstein(lambda i, j: (pack.ricci[i][j] - m.g[i][j] * lam).coeff(e))
        fw = _frame_weyl(lambda p, q: W[p][q].coeff(e))
        rows = rows_of({**fe, **fw})
        if rows:
            out[e] = rows
        if with_metric:
            rg = rows_of(_frame_einstein(lambda i, j: m.g[i][j].coeff(e)))
            if rg:
                gout[e] = rg
    return (out, gout) if with_metric else out


# ------------------------------------------------------------ linear systems
@dataclass
class Block:
    """The equations of weight k at one t-order, linear in the unknowns there.

    ``columns[c]`` holds every row (of any weight) touched by unknown ``c``.
    """

    k: int
    e: int
    rows: list
    cols: list
    matrix: list
    rhs: list
    columns: list

    def live(self) -> list:
        return [n for n, row in enumerate(self.matrix) if any(row) or self.rhs[n]]


def residual_order(sm: SeriesMetric, lam, k: int, e: int, rows: Mapping | None = None,
                   metric_rows: Mapping | None = None) -> Block:
    """The order-k system at t-order ``e``.

    Orders below k must be solved at every t-order, and order k below ``e``.
    ``lam`` is the Einstein constant, or ``None`` at k = e = 0 where it is the
    only unknown.
    """
    zero = GaussRat.coerce(0)
    if rows is None:
        if lam is None:
            r, g = residual_rows(sm, 0, order=e, only=e, with_metric=True)
            rows, metric_rows = r.get(e, {}), g.get(e, {})
        else:
            rows = residual_rows(sm, lam, order=e, only=e).get(e, {})
    if k == 0:
        names = {rk for rk, (_, r2) in rows.items() if row_weight(r2) == 0}
        cols, columns = [], []
        if lam is None:
            if e != 0 or metric_rows is None:
                raise ValueError("the Einstein constant is solved at t-order 0 from the rows of g")
            gcol = {rk: -c for rk, (c, _) in metric_rows.items()}
            names |= {rk for rk in gcol if row_weight(_q(rk)) == 0}
            cols, columns = [("lam",)], [gcol]
    else:
        op = model_operator(sm.N, lam)
        cols = [u[:3] for u in sm.unknowns(k) if u[3] == e]
        columns = [op.column(*c) for c in cols]
        names = {rk for rk, (_, r2) in rows.items() if row_weight(r2) == k}
        for col in columns:
            names.update(rk for rk in col if row_weight(_q(rk)) == k)
    names = sorted(names, key=repr)
    mat = [[col.get(rk, zero) for col in columns] for rk in names]
    rhs = [-rows[rk][0] if rk in rows else zero for rk in names]
    return Block(k, e, names, cols, mat, rhs, columns)


def solve_block(b: Block):
    """``(solution, live rows, rank, consistent)``; free unknowns are set to zero."""
    live = b.live()
    if not b.cols:
        return {}, len(live), 0, not any(b.rhs[n] for n in live)
    if not live:
        return {c: GaussRat.coerce(0) for c in b.cols}, 0, 0, True
    res = solve([b.matrix[n] for n in live], [b.rhs[n] for n in live])
    if not res.consistent:
        return {}, len(live), res.rank, False
    return dict(zip(b.cols, res.solution)), len(live), res.rank, True


# ------------------------------------------------------------------ reports
@dataclass
class OrderReport:
    k: int
    rows: int = 0
    cols: int = 0
    rank: int = 0
    consistent: bool = True
    residual_weight: int | None = None
    weight_bound: int = 0
    degree_limited: bool = False
    blocks: int = 0

    @property
    def square(self) -> bool:
        """Full column rank, so the (overdetermined) system has one solution at most."""
        return self.rank == self.cols

    @property
    def unique(self) -> bool:
        return self.consistent and self.square

    @property
    def obstruction(self) -> bool:
        return not self.consistent

    def as_dict(self) -> dict:
        return {
            "order": self.k, "rows": self.rows, "cols": self.cols, "rank": self.rank,
            "square": self.square, "unique": self.unique, "log_obstruction": self.obstruction,
            "residual_weight": self.residual_weight, "weight_bound": self.weight_bound,
            "degree_limited": self.degree_limited, "blocks": self.blocks,
        }


def _is_model(cr: CRData) -> bool:
    h = heisenberg_cr()
    return cr.eta == h.eta and cr.theta == h.theta and cr.thetabar == h.thetabar


def solve_to_order(cr: CRData, N: int, bound: int = DEFAULT_ORDER_BOUND, degree: int | None = None,
                   verify: bool = True):
    """Solve orders 0..N; returns the solved :class:`SeriesMetric` and one report per order.

    The outer loop runs over t-orders: at each one the residual is recomputed
    and the orders are solved in turn, each solve updating the rows it touches.
    """
    if N > bound:
        raise ConfigError(f"order {N} exceeds the configured bound {bound}")
    sm = ansatz(cr, N, degree)
    limited = not _is_model(cr)
    if limited:
        sm.t_cap = clean_t_order(sm)
    reports = [OrderReport(k, weight_bound=sm.t_order - 2 * k, degree_limited=limited) for k in range(N + 1)]
    for e in range(sm.t_order + 1):
        if e == 0:
            r, g = residual_rows(sm, 0, order=0, only=0, with_metric=True)
            rows, grows = dict(r.get(0, {})), g.get(0, {})
        else:
            rows, grows = dict(residual_rows(sm, sm.lam, order=e, only=e).get(e, {})), None
        for k in range(N + 1):
            lam = None if (k == 0 and e == 0) else sm.lam
            b = residual_order(sm, lam, k, e, rows, grows)
            sol, nrows, rk, ok = solve_block(b)
            rep = reports[k]
            rep.rows += nrows
            rep.cols += len(b.cols)
            rep.rank += rk
            rep.consistent = rep.consistent and ok
            rep.blocks += bool(nrows or b.cols)
            for c, col in zip(b.cols, b.columns):
                val = sol.get(c)
                if not val:
                    continue
                if c == ("lam",):
                    sm.lam = val
                else:
                    kk, slot, e3 = c
                    sm.coeffs.setdefault((kk, slot), {})[e3] = val
                for name, coef in col.items():
                    old = rows[name][0] if name in rows else GaussRat.coerce(0)
                    new = old + coef * val
                    if new:
                        rows[name] = (new, _q(name))
                    else:
                        rows.pop(name, None)
            if k == 0 and e == 0 and sm.lam is None:
                # no Einstein constant fits the leading rows
                rep.consistent = False
                sm.lam = GaussRat.coerce(0)
    sm.solved_orders = N
    if verify:
        w = residual_weight(sm)
        for rep in reports:
            rep.residual_weight = w
    return sm, reports


def residual_weight(sm: SeriesMetric) -> int | None:
    """Least x-weight of a nonzero residual row, ``None`` if all known rows vanish."""
    rows = residual_rows(sm, sm.lam)
    ws = [row_weight(r2) for tab in rows.values() for (_, r2) in tab.values()]
    return min(ws) if ws else None


def laurent_to_ratfunc(p: MPoly) -> RatFunc:
    """A Laurent polynomial in x as a rational function on the chart."""
    m = min((e[0] for e, _ in p.terms()), default=0)
    if m >= 0:
        return RatFunc.from_poly(p)
    return RatFunc.from_poly(p * _x(-m)) / RatFunc.from_poly(_x(-m))


def matches_metric(sm: SeriesMetric, reference: MetricField) -> bool:
    """Exact entrywise equality of the solved truncation (t = 1) with a closed-form metric."""
    g = sm.series_metric().g
    return all(laurent_to_ratfunc(g[i][j].at(1)) == reference.g[i][j] for i in range(4) for j in range(4))


# --------------------------------------------------------------- signature
def signature_branch(sm: SeriesMetric, side, point: Mapping | None = None) -> tuple[int, int]:
    """Exact signature of the truncated metric at ``x = side`` on the real slice.

    ``side`` is the x-value; it must satisfy 0 < |x| <= 1/10 so that the
    truncation error cannot change the signature near the origin.
    """
    x = Fraction(side)
    if x == 0:
        raise DomainError("the metric has a pole at x = 0")
    if abs(x) > Fraction(1, 10):
        raise DomainError("sample too far from the boundary for a truncated series")
    if sm.solved_orders < 0 and sm.coeffs:
        raise DomainError("metric is not solved")
    pt = {"s": 0, "u": 0, "v": 0}
    if point:
        pt.update(point)
    a, b = GaussRat.coerce(pt.get("a", 0)), GaussRat.coerce(pt.get("b", 0))
    p = {"x": x, "s": pt["s"], "u": a + I * b, "v": a - I * b}
    real = real_slice_values(sm.metric_at(p), complex_to_real_jacobian())
    m = []
    for row in real:
        r = []
        for c in row:
            if not c.is_real():
                raise DomainError("metric is not real on the real slice")
            r.append(c.re)
        m.append(r)
    pos, neg, zero = sturm_signature(m)
    if zero:
        raise DomainError("metric is degenerate at the sample point")
    return pos, neg
