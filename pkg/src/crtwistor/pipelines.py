"""Verification pipelines behind the command-line driver.

Each pipeline returns a :class:`Report`: named boolean invariants plus a
JSON-ready data section. Exact values are stored as strings (GaussRat) or in
the symalg canonical text form.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import expansion_solver as es
from . import inverse_transform as it
from . import nodal_curves as nc
from . import twistor_model as tm
from .errors import DomainError
from .models import (
    bergmann_metric, bergmann_numeric, heisenberg_cr, oracle_in_model_chart, signature_at,
)
from .symalg import GaussRat, TSeries, dumps
from .tensor import einstein_constant, fd_ricci, weyl_split

FD_TOLERANCE = 1e-8


@dataclass
class Report:
    name: str
    checks: dict = field(default_factory=dict)
    data: dict = field(default_factory=dict)

    def check(self, invariant: str, ok) -> bool:
        ok = bool(ok)
        self.checks[invariant] = self.checks.get(invariant, True) and ok
        return ok

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def failures(self) -> list:
        return [k for k, v in self.checks.items() if not v]

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "checks": dict(self.checks), "data": self.data}


def _s(x) -> str:
    return str(GaussRat.coerce(x))


# ------------------------------------------------------------- bergmann
def verify_bergmann(seed: int = 0) -> Report:
    rep = Report("verify-bergmann")
    g = bergmann_metric()
    lam = einstein_constant(g)
    rep.check("einstein", lam is not None)
    rng = random.Random(seed)
    import mpmath

    with mpmath.workdps(30):
        pt = [mpmath.mpf(rng.randint(-20, 20)) / 100 for _ in range(4)]
        ric, gv = fd_ricci(bergmann_numeric, pt)
        ratios = [ric[i][j] / gv[i][j] for i in range(4) for j in range(4) if abs(gv[i][j]) > mpmath.mpf("1e-6")]
        fd = sum(ratios) / len(ratios)
        spread = max(abs(r - fd) for r in ratios)
        rep.data["fd_point"] = [mpmath.nstr(c, 6) for c in pt]
        rep.data["fd_lambda"] = mpmath.nstr(fd, 12)
    rep.check("fd_ricci_proportional", spread < FD_TOLERANCE)
    if lam is not None:
        rep.data["lambda"] = _s(lam.eval({}))
        rep.check("lambda_matches_fd_oracle", abs(fd - float(lam.eval({}).re)) < FD_TOLERANCE)
    ws = weyl_split(g)
    rep.check("w_minus_zero", ws.is_self_dual())
    rep.check("w_plus_nonzero", not ws.is_anti_self_dual())
    sig = {}
    for r, want in ((Fraction(1, 2), (4, 0)), (Fraction(2), (2, 2))):
        got = signature_at(g, {"x1": r, "x2": 0, "x3": 0, "x4": 0})
        sig[str(r)] = list(got)
        rep.check(f"signature_at_r={r}", got == want)
    rep.data["signatures"] = sig
    return rep


# -------------------------------------------------------------- twistor
def _flag_json(f: tm.FlagPoint) -> dict:
    return {"D": [_s(x) for x in tm.normalize(f.D)], "P": [_s(x) for x in tm.normalize(f.P)]}


def _curve_checks(rep: Report, rng: random.Random, nodal: bool, keep: list | None):
    d = tm.random_vector(rng)
    if nodal:
        while True:
            p = tm.cross(d, tm.random_vector(rng))
            if tm.is_nonzero(p):
                break
    else:
        while True:
            p = tm.random_vector(rng)
            if tm.pair(p, d):
                break
    c = tm.CurveParam(d, p)
    rep.check("curve_dichotomy", c.nodal == nodal)
    params = [GaussRat(0), GaussRat(1), None, GaussRat(rng.randint(-3, 3), rng.randint(-3, 3))]
    pts = []
    if not nodal:
        for t in params:
            f = tm.curve_family(c, t)
            if f is None:
                continue
            pts.append(f)
            rep.check("smooth_curve_incidence", not tm.pair(c.p, f.D) and not tm.pair(f.P, c.d))
        try:
            tm.node(c)
            rep.check("smooth_curve_has_no_node", False)
        except DomainError:
            rep.check("smooth_curve_has_no_node", True)
    else:
        nd = tm.node(c)
        for t in params:
            a, b = tm.curve_family(c, t, "D"), tm.curve_family(c, t, "P")
            pts += [a, b]
            rep.check("nodal_branch_incidence", tm.proportional(a.P, c.p) and tm.proportional(b.D, c.d))
        rep.check("node_on_both_branches", tm.proportional(nd.D, c.d) and tm.proportional(nd.P, c.p))
    if keep is not None:
        keep.append({"d": [_s(x) for x in d], "p": [_s(x) for x in p], "nodal": nodal,
                     "points": [_flag_json(f) for f in pts]})


def twistor_check(samples: int = 1000, seed: int = 0, keep_curves: int = 4) -> Report:
    rep = Report("twistor-check")
    rng = random.Random(seed)
    sides = ("T+", "T-", "S3")
    curves = []
    for n in range(samples):
        f = tm.random_flag(rng)
        ell = tm.twistor_projection(f)
        rep.check("projection_positive_on_N", tm.classify_line(ell) == "positive")
        tf = tm.real_structure(f)
        rep.check("tau_squared_identity", tm.real_structure(tf).same(f))
        rep.check("tau_preserves_N", tf.in_domain())
        rep.check("projection_tau_invariant", tm.proportional(tm.twistor_projection(tf), ell))
        side = sides[n % 3]
        b = tm.random_boundary_flag(rng, side)
        rep.check("boundary_component", b.component() == side)
        tb = tm.real_structure(b)
        if side == "T+":
            rep.check("T+_projection_is_D", tm.proportional(tm.twistor_projection(b), b.D))
            rep.check("tau_swaps_T+_T-", tb.component() == "T-")
        elif side == "T-":
            rep.check("T-_projection_is_P_perp", tm.proportional(tm.twistor_projection(b), tm.perp_of_plane(b.P)))
            rep.check("tau_swaps_T+_T-", tb.component() == "T+")
        else:
            rep.check("tau_fixes_S3", tb.same(b))
        _curve_checks(rep, rng, n % 2 == 0, curves if len(curves) < keep_curves else None)
    rep.data["curves"] = curves
    # contact transversality
    for _ in range(20):
        rep.check("contact_transverse_to_fiber", tm.contact_transverse(tm.random_flag(rng)))
    # Hausdorff limit: exact on the standard nodal curve, asymptotic on random ones
    base = tm.CurveParam(tm.E2, (1, 0, 0))
    samp = [0, 1, 2, -1, GaussRat(1, 1)]
    dist, ratios = tm.hausdorff_check(base, tm.E1, samp)
    rep.check("hausdorff_linear_standard", all(r == 4 for r in ratios))
    haus = [{"distances": [str(x) for x in dist], "ratios": [str(r) for r in ratios]}]
    deep = tuple(Fraction(1, 2 ** k) for k in range(10, 13))
    for _ in range(3):
        d = tm.random_vector(rng)
        p = tm.cross(d, tm.random_vector(rng))
        if not tm.is_nonzero(p):
            continue
        w = tm.random_vector(rng)
        if not tm.pair(p, w):
            continue
        dist, ratios = tm.hausdorff_check(tm.CurveParam(d, p), w, samp, deep)
        rep.check("hausdorff_linear_random", all(r is not None and 3 < r < 5 for r in ratios))
        haus.append({"distances": [str(x) for x in dist], "ratios": [str(r) for r in ratios]})
    rep.data["hausdorff"] = haus
    # conformal fiber conics
    rep.check("fiber_conic_point", tm.conformal_fiber_curve(1).contains(1, 1, -1))
    rep.check("fiber_conic_degenerate_at_0", tm.conformal_fiber_curve(0).components() == [(0, 1, 0), (0, 0, 1)])
    for x in (Fraction(1, 3), Fraction(-2), Fraction(0)):
        rep.check("fiber_conic_smooth_iff_x_nonzero", tm.conformal_fiber_curve(x).is_smooth() == (x != 0))
    rep.data["samples"] = samples
    return rep


# ---------------------------------------------------------------- nodal
def nodal_check() -> Report:
    rep = Report("nodal-check")
    sections, dual = nc.standard_basis()
    glob = nc.global_sections()
    rep.check("global_dimension_4", len(glob) == 4)
    rep.check("standard_basis_spans", nc.spans(sections))
    rep.check("residue_compatibility", all(nc.check_compatibility(s) for s in sections))
    pm = nc.pairing_matrix(sections, dual)
    rep.check("duality_pairing", all(pm[i][j] == int(i == j) for i in range(4) for j in range(4)))
    rep.data["pairing"] = [[_s(x) for x in row] for row in pm]
    types = nc.splitting_enumerate()
    rep.check("splitting_types", types == {nc.SplittingType(0, 2, 2), nc.SplittingType(1, 1, 2)})
    rep.data["splitting_types"] = sorted(list(t.degrees()) for t in types)
    h = nc.nodal_cohomology(nc.EQ11, nc.EQ11)
    rep.check("nodal_cohomology_C7", h == (7, 0))
    dims = nc.deformation_dimension()
    rep.check("deformation_dimensions", (dims["dimension"], dims["nodal_subfamily"]) == (4, 3))
    rep.data["cohomology"] = list(h)
    rep.data["deformation"] = dims
    return rep


# -------------------------------------------------------- inverse transform
def _series_json(t: TSeries) -> str:
    return dumps(t)


def inverse_transform(seed: int = 0, samples: int = 20) -> Report:
    rep = Report("inverse-transform")
    cr = heisenberg_cr()
    for br in "+-":
        h = it.horizontal_vector(cr, br)
        rep.check("horizontal_vector_model", all((a - b).is_zero() for a, b in zip(h.components, it.model_horizontal(br))))
        emb = it.leaf_embed(cr, br)
        rep.check("leaf_embedding_model", emb.exact and all(emb.images[k] == v for k, v in it.model_leaf(br).items()))
    rep.check("leaf_plus_at_023", it.leaf_embed(cr, "+").at((0, 2, 3)) == (GaussRat(0, 3), GaussRat(2), GaussRat(0, -3)))
    rep.check("leaf_minus_at_023", it.leaf_embed(cr, "-").at((0, 2, 3)) == (GaussRat(0, -3), GaussRat(3), GaussRat(0, 2)))
    th = it.theta_expansion()
    rep.check("dtheta_plus_is_minus_one", th.plus == -1)
    rep.check("dtheta_minus_is_minus_one", th.minus == -1)
    rep.check("theta_transverse", th.transverse)
    rep.data["dtheta"] = {"+": _s(th.plus), "-": _s(th.minus)}
    table = {"(1,z^2)": it.upsilon((1, 0, 0), (0, 0, 1)), "(z,z)": it.upsilon((0, 1, 0), (0, 1, 0)),
             "(1,1)": it.upsilon((1, 0, 0), (1, 0, 0))}
    rep.check("upsilon_table", list(table.values()) == [2, -1, 0])
    rep.data["upsilon"] = {k: _s(v) for k, v in table.items()}
    # ell^2 Upsilon on the smoothing against -a a' - 2 L (b c' + b' c)
    rng = random.Random(seed)
    for _ in range(samples):
        s, t = (nc.LSection(*(GaussRat(rng.randint(-4, 4), rng.randint(-4, 4)) for _ in range(3))) for _ in range(2))
        want = TSeries("L", (), {0: -(s.a * t.a), 1: (s.b * t.c + t.b * s.c) * -2}, 1)
        extra = TSeries("eps", (), {1: -1, 2: GaussRat(rng.randint(-4, 4), rng.randint(-4, 4))}, 2)
        rep.check("upsilon_nodal_expansion", it.upsilon_nodal(s, t) == want and it.upsilon_nodal(s, t, extra) == want)
    ex = it.contact_two_form_expansion()
    ok = all((ex[k].a, ex[k].b, ex[k].c) == tuple(GaussRat.coerce(x) for x in v) for k, v in it.EXPECTED_TABLE.items())
    rep.check("contact_two_form_table", ok)
    rep.data["contact_table"] = {f"s{i}^s{j}": [_s(ex[(i, j)].a), _s(ex[(i, j)].b), _s(ex[(i, j)].c)] for i, j in sorted(ex)}
    gram = it.gram_matrix()
    rep.data["gram"] = [[_series_json(x) for x in row] for row in gram]
    lead = [[x.truncate(1) for x in row] for row in gram]
    rep.check("gram_leading_minus_identity",
              all(lead[i][j] == TSeries("q", (), {0: -int(i == j)}, 1) for i in range(3) for j in range(3)))
    om = it.omega_forms()
    ref = it.reference_triple()
    rep.check("omega_leading_terms", all(
        it.same_through(o.change_coframe(it.TO_ALPHA).comps[k], r.comps[k])
        for o, r in zip(om, ref) for k in it.PAIRS4))
    rec = it.reconstruct_metric()
    target = it.target_metric()
    rep.check("reconstructed_equals_target", rec.metric.matrix == target.matrix)
    rep.check("reconstructed_matches_asymptotic_chart", it.matches_asymptotic(rec.metric))
    rep.check("omegas_anti_self_dual", all(
        all(f.comps[k].truncate(f.valuation() + 1).is_zero() for k in it.PAIRS4) for f in rec.anti_self_dual()))
    rep.data["metric"] = {f"{a}*{b}": dumps(rec.metric.matrix[i][j])
                          for i, a in enumerate(rec.metric.coframe) for j, b in enumerate(rec.metric.coframe)
                          if j >= i and not rec.metric.matrix[i][j].is_zero()}
    return rep


# --------------------------------------------------------------- expand
def expand(cr=None, order: int = 2, bound: int = es.DEFAULT_ORDER_BOUND, tables: bool = True) -> Report:
    cr = cr or heisenberg_cr()
    rep = Report("expand")
    sm, reports = es.solve_to_order(cr, order, bound)
    rep.data["lambda"] = _s(sm.lam)
    rep.data["orders"] = [r.as_dict() for r in reports]
    rep.check("lambda_is_minus_three_halves", sm.lam == GaussRat(Fraction(-3, 2)))
    rep.check("gauge", sm.gauge_holds())
    for r in reports:
        rep.check(f"order_{r.k}_unique", r.unique)
        rep.check(f"order_{r.k}_no_log_obstruction", not r.obstruction)
    if es._is_model(cr):
        rep.check("matches_complex_hyperbolic_oracle", es.matches_metric(sm, oracle_in_model_chart()))
    sig = {}
    for x, want in ((Fraction(1, 100), (4, 0)), (Fraction(-1, 100), (2, 2))):
        got = es.signature_branch(sm, x)
        sig[str(x)] = list(got)
        rep.check(f"signature_at_x={x}", got == want)
    rep.data["signatures"] = sig
    if tables:
        rep.data["coefficients"] = {f"{k}:{slot}": dumps(sm.slot_poly(k, slot))
                                    for k in range(1, order + 1) for slot in es.SLOTS}
    return rep
