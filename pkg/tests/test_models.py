import json
import random
from fractions import Fraction

import pytest

from crtwistor.errors import ConfigError, DomainError
from crtwistor.forms import Form
from crtwistor.models import (
    CR, TAU, asymptotic_metric, bergmann_metric, crdata_from_json, crdata_to_json, heisenberg_cr,
    levi_direct, max_degree, oracle_in_model_chart, parabolic_dilation, perturbed_cr, pullback_cr,
    random_perturbation, signature_at,
)
from crtwistor.symalg import GaussRat, MPoly, RatFunc
from crtwistor.tensor import einstein_constant, weyl_split


@pytest.fixture(scope="module")
def bergmann():
    return bergmann_metric()


def test_bergmann_einstein(bergmann):
    assert einstein_constant(bergmann) == RatFunc.const(bergmann.chart.coords, -6)


def test_bergmann_self_dual(bergmann):
    w = weyl_split(bergmann)
    assert w.is_self_dual() and not w.is_anti_self_dual()


def test_bergmann_signatures(bergmann):
    pt = lambda r: {"x1": r, "x2": 0, "x3": 0, "x4": 0}
    assert signature_at(bergmann, pt(Fraction(1, 2))) == (4, 0)
    assert signature_at(bergmann, pt(2)) == (2, 2)
    with pytest.raises(DomainError):
        signature_at(bergmann, pt(1))


def test_heisenberg_contact_and_levi():
    h = heisenberg_cr()
    assert h.is_contact()
    assert h.levi_factor() == RatFunc.const(CR, 1)
    h.check()


def test_levi_formula_matches_direct_definition():
    h = perturbed_cr(random_perturbation(random.Random(2)))
    R, xi, xib = h.dual_frame()
    c = h.levi_factor()
    # gamma(xi, xibar) = deta(xi, J xibar) = -i deta(xi, xibar) = c
    assert levi_direct(h, xi, xib) == c


def test_real_structure_is_involution():
    pt = (GaussRat(1, 2), GaussRat(0, 3), GaussRat(-1, 1))
    assert TAU(TAU(pt)) == pt
    assert TAU.is_fixed((1, GaussRat(2, 1), GaussRat(2, -1)))


def test_model_metric_einstein_and_self_dual():
    g = asymptotic_metric(heisenberg_cr())
    assert einstein_constant(g) == RatFunc.const(g.chart.coords, Fraction(-3, 2))
    X = RatFunc.var(g.chart.coords, "x")
    assert weyl_split(g, (X ** 3).inverse() * GaussRat(0, -1)).is_self_dual()


def test_model_equals_complex_hyperbolic_oracle():
    g = asymptotic_metric(heisenberg_cr())
    assert oracle_in_model_chart().g == g.g


def test_parabolic_dilation():
    assert parabolic_dilation(2, (1, 1)) == (4, 2)
    with pytest.raises(DomainError):
        parabolic_dilation(0, (1, 1))


def test_heisenberg_dilation_invariant():
    h = heisenberg_cr()
    d = pullback_cr(h, 3)
    assert d.eta == h.eta and d.theta == h.theta


def test_json_roundtrip():
    tp = random_perturbation(random.Random(5))
    obj = crdata_to_json(tp)
    cr = crdata_from_json(json.dumps(obj))
    assert cr.theta == perturbed_cr(tp).theta


def test_json_rejects_bad_input():
    with pytest.raises(ConfigError):
        crdata_from_json({"bogus": {}})
    with pytest.raises(ConfigError):
        crdata_from_json("[1, 2]")
    with pytest.raises(ConfigError):
        crdata_from_json({"theta1": {"du": [[[9, 0, 0], "1"]]}})  # above the degree bound


def test_json_rejects_non_real_eta():
    with pytest.raises(ConfigError):
        crdata_from_json({"eta": {"ds": [[[0, 1, 0], "1"]]}})


def test_max_degree_env(monkeypatch):
    monkeypatch.setenv("CRTWISTOR_MAX_DEGREE", "6")
    assert max_degree() == 6
    monkeypatch.setenv("CRTWISTOR_MAX_DEGREE", "x")
    with pytest.raises(ConfigError):
        max_degree()


def test_non_pseudoconvex_rejected():
    one = RatFunc.const(CR, 1)
    eta = Form.one_form(CR, [one, RatFunc.var(CR, "v") * GaussRat(0, Fraction(1, 2)),
                             RatFunc.var(CR, "u") * GaussRat(0, Fraction(-1, 2))])
    h = heisenberg_cr()
    from crtwistor.models import CRData

    with pytest.raises(DomainError):
        CRData(eta, h.theta, h.thetabar).check()


def test_random_perturbation_is_order_two():
    for seed in range(5):
        for p in random_perturbation(random.Random(seed)):
            assert all(sum(e) >= 2 for e, _ in p.terms())
            assert isinstance(p, MPoly)
