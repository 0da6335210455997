import random

import pytest

from crtwistor import inverse_transform as it
from crtwistor.errors import DomainError
from crtwistor.forms import Form
from crtwistor.models import heisenberg_cr, perturbed_cr, random_perturbation
from crtwistor.nodal_curves import LSection
from crtwistor.symalg import GaussRat, RatFunc, TSeries

I = GaussRat(0, 1)


def test_liouville_differential():
    lv = it.liouville(heisenberg_cr())
    c = lv.chart
    one = RatFunc.const(c, 1)
    dz_minus_idv = Form.one_form(c, [one * 0, one * 0, -I * one, one])
    du = Form.one_form(c, [one * 0, one, one * 0, one * 0])
    assert lv.dlam == dz_minus_idv.wedge(du)


def test_horizontal_vector_model():
    for br in "+-":
        h = it.horizontal_vector(heisenberg_cr(), br)
        assert all((a - b).is_zero() for a, b in zip(h.components, it.model_horizontal(br)))


def test_horizontal_vector_at_u_equals_2():
    h = it.horizontal_vector(heisenberg_cr(), "+")
    pt = {"s": 0, "u": 2, "v": 0, "zp": 0}
    assert [c.eval(pt) for c in h.components] == [-I, 0, 1, I]


def test_leaf_embedding_examples():
    cr = heisenberg_cr()
    assert it.leaf_embed(cr, "+").at((0, 2, 3)) == (3 * I, GaussRat(2), -3 * I)
    assert it.leaf_embed(cr, "-").at((0, 2, 3)) == (-3 * I, GaussRat(3), 2 * I)


def test_perturbed_horizontal_vector_agrees_to_leading_order():
    cr = perturbed_cr(random_perturbation(random.Random(1)))
    h = it.horizontal_vector(cr)
    diffs = [it.order_of(a - b) for a, b in zip(h.components, it.model_horizontal("+"))]
    assert all(d >= 1 for d in diffs)


def test_upsilon_table():
    assert it.upsilon((1, 0, 0), (0, 0, 1)) == 2
    assert it.upsilon((0, 1, 0), (0, 1, 0)) == -1
    assert it.upsilon((1, 0, 0), (1, 0, 0)) == 0


def test_upsilon_nodal_examples():
    assert it.upsilon_nodal(LSection(1, 0, 0), LSection(1, 0, 0)) == TSeries("L", (), {0: -1}, 1)
    assert it.upsilon_nodal(LSection(0, 1, 0), LSection(0, 0, 1)) == TSeries("L", (), {1: -2}, 1)


def test_upsilon_nodal_independent_of_higher_theta_terms():
    s, t = LSection(1, 2, I), LSection(-1, 3, 1)
    base = it.upsilon_nodal(s, t)
    assert it.upsilon_nodal(s, t, TSeries("eps", (), {1: -1, 2: 7}, 2)) == base


def test_upsilon_nodal_needs_vanishing_theta():
    with pytest.raises(DomainError):
        it.upsilon_nodal(LSection(1, 0, 0), LSection(1, 0, 0), TSeries("eps", (), {0: 1, 1: -1}, 2))


def test_theta_expansion():
    th = it.theta_expansion()
    assert th.plus == th.minus == -1 and th.transverse


def test_contact_two_form_table():
    ex = it.contact_two_form_expansion()
    for k, v in it.EXPECTED_TABLE.items():
        assert (ex[k].a, ex[k].b, ex[k].c) == tuple(GaussRat.coerce(x) for x in v)


def test_gram_matrix_leading():
    g = it.gram_matrix()
    for i in range(3):
        for j in range(3):
            assert g[i][j].truncate(1) == TSeries("q", (), {0: -int(i == j)}, 1)


def test_omega_triple_matches_reference():
    om = it.omega_forms()
    ref = it.reference_triple()
    for o, r in zip(om, ref):
        a = o.change_coframe(it.TO_ALPHA)
        assert all(it.same_through(a.comps[k], r.comps[k]) for k in it.PAIRS4)


def test_reconstructed_metric():
    rec = it.reconstruct_metric()
    assert rec.metric.matrix == it.target_metric().matrix
    m = rec.metric.matrix
    L = ("L",)
    from crtwistor.symalg import MPoly

    assert m[1][1] == MPoly.monomial(L, (-2,), 4)  # eta^2 coefficient
    assert m[2][3] == MPoly.monomial(L, (-1,), 2)  # gamma coefficient
    assert it.matches_asymptotic(rec.metric)


def test_reconstruction_rejects_inconsistent_table():
    table = dict(it.contact_two_form_expansion())
    table[(0, 2)] = LSection(0, 5, 0)
    with pytest.raises(DomainError):
        it.reconstruct_metric(it.omega_forms(table))
