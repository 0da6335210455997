import random

import pytest

from crtwistor.errors import DegenerateMetricError
from crtwistor.symalg import MPoly, RatFunc
from crtwistor.tensor import (
    PAIRS, Chart, MetricField, christoffel, curvature, einstein_constant, hodge_star,
    metric_from_polys, residual_report, volume_form, weyl_split,
)

C = ("a", "b", "c", "d")


def diag(entries, coords=C, orientation=1):
    z = RatFunc.const(coords, 0)
    return MetricField(Chart(coords, orientation),
                       [[entries[i] if i == j else z for j in range(4)] for i in range(4)])


def euclid():
    one = RatFunc.const(C, 1)
    return diag([one] * 4)


def test_flat_christoffels_vanish():
    _, _, gam = christoffel(euclid())
    assert all(c.is_zero() for a in gam for b in a for c in b)


def test_half_space_christoffel():
    X = RatFunc.var(C, "a")
    inv2 = (X * X).inverse()
    _, _, gam = christoffel(diag([inv2] * 4))
    assert gam[0][0][0] == -X.inverse()


def test_hyperbolic_space_einstein():
    X = RatFunc.var(C, "a")
    inv2 = (X * X).inverse()
    assert einstein_constant(diag([inv2] * 4)) == RatFunc.const(C, -3)


def test_flat_curvature_and_bianchi():
    pack = curvature(euclid())
    assert all(v.is_zero() for v in pack.riem.values())
    assert pack.first_bianchi().is_zero()


def test_star_is_involution_in_riemannian_signature():
    H = hodge_star(euclid())
    sq = [[sum((H[i][k] * H[k][j] for k in range(6)), RatFunc.const(C, 0)) for j in range(6)] for i in range(6)]
    assert all(sq[i][j] == RatFunc.const(C, int(i == j)) for i in range(6) for j in range(6))
    # *(da ^ db) = dc ^ dd
    assert H[PAIRS.index((2, 3))][PAIRS.index((0, 1))] == RatFunc.const(C, 1)


def test_star_conformally_invariant():
    rng = random.Random(3)
    f = RatFunc.from_poly(MPoly(C, {(rng.randint(0, 2), rng.randint(0, 2), 0, 0): 1})) + 2
    g = euclid()
    assert hodge_star(g.scaled(f * f)) == hodge_star(g)


def test_conformally_flat_has_no_weyl():
    A = RatFunc.var(C, "a")
    f = (A * A + 1)
    w = weyl_split(diag([f] * 4))
    assert w.is_self_dual() and w.is_anti_self_dual()


def test_orientation_swaps_weyl_halves():
    from crtwistor.models import bergmann_metric

    g = bergmann_metric()
    w = weyl_split(g.with_orientation(-1))
    assert w.is_anti_self_dual() and not w.is_self_dual()


def test_degenerate_metric():
    z = RatFunc.const(C, 0)
    g = MetricField(Chart(C), [[z] * 4 for _ in range(4)])
    with pytest.raises(DegenerateMetricError):
        g.det()


def test_asymmetric_metric_rejected():
    one, z = RatFunc.const(C, 1), RatFunc.const(C, 0)
    rows = [[one if i == j else z for j in range(4)] for i in range(4)]
    rows[0][1] = one
    with pytest.raises(ValueError):
        MetricField(Chart(C), rows)


def test_volume_sign_follows_orientation():
    g = euclid()
    assert volume_form(g) == RatFunc.const(C, 1)
    assert volume_form(g.with_orientation(-1)) == RatFunc.const(C, -1)


def test_metric_from_polys_and_report():
    g = metric_from_polys(C, [[1 if i == j else 0 for j in range(4)] for i in range(4)])
    rep = residual_report(curvature(g).ricci, [{"a": 0, "b": 0, "c": 0, "d": 0}])
    assert rep["all_zero"] and len(rep["components"]) == 16
    assert rep["components"][0]["samples"] == ["0"]


def test_series_metric_curvature_agrees_with_exact():
    """Curvature through the series engine equals the expansion of the exact curvature."""
    from crtwistor.symalg import expand

    tc = ("t",) + C
    T, A = RatFunc.var(tc, "t"), RatFunc.var(tc, "a")
    z = RatFunc.const(tc, 0)
    f = (1 + T * A) ** 2
    exact = MetricField(Chart(C), [[f if i == j else z for j in range(4)] for i in range(4)])
    series = exact.map(lambda c: expand(c, "t", 3, C))
    assert curvature(series).scalar == expand(curvature(exact).scalar, "t", 3, C)


def test_fd_oracle_on_hyperbolic_space():
    import mpmath

    from crtwistor.tensor import fd_ricci

    def h(p):
        s = 1 / (p[0] * p[0])
        return [[s if i == j else 0 for j in range(4)] for i in range(4)]

    ric, g = fd_ricci(h, ["0.5", 0, 0, 0])
    assert abs(ric[1][1] / g[1][1] + 3) < mpmath.mpf(10) ** -8
