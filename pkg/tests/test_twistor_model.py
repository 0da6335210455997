import random
from fractions import Fraction

import pytest

from crtwistor import twistor_model as tm
from crtwistor.errors import DomainError
from crtwistor.symalg import GaussRat

E1, E2, E3 = tm.E1, tm.E2, tm.E3


def test_hermitian_form_is_hermitian():
    rng = random.Random(0)
    for _ in range(50):
        a, b = tm.random_vector(rng), tm.random_vector(rng)
        assert tm.herm(a, b) == tm.herm(b, a).conj()


@pytest.mark.parametrize("v, kind", [(E1, "positive"), (E2, "negative"), ((1, 1, 0), "isotropic")])
def test_classify_line(v, kind):
    assert tm.classify_line(tm.vec(v)) == kind


def test_projection_example():
    f = tm.FlagPoint(E2, (0, 0, 1))  # P = span{e1, e2}
    assert tm.proportional(tm.twistor_projection(f), E1)


def test_real_structure_example():
    f = tm.FlagPoint(E2, (0, 0, 1))
    tf = tm.real_structure(f)
    assert tm.proportional(tf.D, E3)
    assert tm.proportional(tf.P, (0, 1, 0))
    assert tm.real_structure(tf).same(f)


def test_incidence_enforced():
    with pytest.raises(DomainError):
        tm.FlagPoint(E1, (1, 0, 0))


def test_boundary_projections():
    rng = random.Random(4)
    for _ in range(30):
        b = tm.random_boundary_flag(rng, "T+")
        assert b.component() == "T+" and tm.proportional(tm.twistor_projection(b), b.D)
        b = tm.random_boundary_flag(rng, "T-")
        assert b.component() == "T-"
        assert tm.proportional(tm.twistor_projection(b), tm.perp_of_plane(b.P))
        s = tm.random_boundary_flag(rng, "S3")
        assert tm.real_structure(s).same(s)


def test_tau_exchanges_boundary_components():
    rng = random.Random(5)
    b = tm.random_boundary_flag(rng, "T+")
    assert tm.real_structure(b).component() == "T-"


def test_smooth_curve_family():
    c = tm.CurveParam(E1, (1, 0, 0))
    assert not c.nodal
    for t in (0, 1, -2, GaussRat(1, 1), None):
        f = tm.curve_family(c, t)
        if f is not None:
            assert not tm.pair(c.p, f.D) and not tm.pair(f.P, c.d)


def test_nodal_curve_family():
    c = tm.CurveParam(E2, (1, 0, 0))
    assert c.nodal
    nd = tm.node(c)
    assert nd.same(tm.FlagPoint(E2, (1, 0, 0)))
    for k in range(100):
        t = GaussRat(Fraction(k, 7) - 5, k % 3)
        a, b = tm.curve_family(c, t, "D"), tm.curve_family(c, t, "P")
        assert tm.proportional(a.P, c.p) and tm.proportional(b.D, c.d)
    with pytest.raises(ValueError):
        tm.curve_family(c, 0)


def test_node_of_smooth_curve_raises():
    with pytest.raises(DomainError):
        tm.node(tm.CurveParam(E1, (1, 0, 0)))


def test_hausdorff_limit_linear():
    _, ratios = tm.hausdorff_check(tm.CurveParam(E2, (1, 0, 0)), E1, [0, 1, 2, GaussRat(0, 1)])
    assert ratios == [4, 4]


def test_contact_transverse():
    rng = random.Random(1)
    assert all(tm.contact_transverse(tm.random_flag(rng)) for _ in range(20))


def test_fiber_conic():
    assert tm.conformal_fiber_curve(1).contains(1, 1, -1)
    q = tm.conformal_fiber_curve(Fraction(2, 3))
    assert q.contains(*q.point(GaussRat(1, 2)))
    assert q.is_smooth() and not tm.conformal_fiber_curve(0).is_smooth()
    assert tm.conformal_fiber_curve(0).components() == [(0, 1, 0), (0, 0, 1)]
