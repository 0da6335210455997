from fractions import Fraction

import pytest

from crtwistor import expansion_solver as es
from crtwistor.errors import ConfigError, DomainError
from crtwistor.models import ASYM, CR, asymptotic_metric, heisenberg_cr, oracle_in_model_chart, perturbed_cr
from crtwistor.symalg import GaussRat, MPoly, RatFunc

I = GaussRat(0, 1)
HALF_I = GaussRat(0, Fraction(1, 2))
s, u, v = MPoly.gens(CR)
ZERO = MPoly.zero(CR)


@pytest.fixture(scope="module")
def heis2():
    return es.solve_to_order(heisenberg_cr(), 2)


def transported_heisenberg():
    """Heisenberg data in the coordinates (u, v) -> (u + v^2, v + u^2)."""
    theta = [ZERO, ZERO, v * 2]
    eta = [ZERO, u * u * HALF_I + u * v * v * I, -(v * v * HALF_I) - u * u * v * I]
    return perturbed_cr(theta, eta, "transported")


def test_ansatz_leading_block_is_model():
    sm = es.ansatz(heisenberg_cr(), 0)
    assert sm.unknowns() == []
    assert sm.gauge_holds()
    g = sm.series_metric().g
    model = asymptotic_metric(heisenberg_cr()).g
    assert all(es.laurent_to_ratfunc(g[i][j].at(1)) == model[i][j] for i in range(4) for j in range(4))


def test_unknown_counts_grow_with_order():
    sm = es.ansatz(heisenberg_cr(), 2)
    assert len(sm.unknowns(1)) > 0 and len(sm.unknowns(2)) > 0
    assert all(e <= sm.t_order for *_, e in sm.unknowns())


def test_order_zero_fixes_lambda():
    sm, reps = es.solve_to_order(heisenberg_cr(), 0)
    assert len(reps) == 1 and reps[0].unique
    assert sm.lam == GaussRat(Fraction(-3, 2))


def test_heisenberg_matches_oracle(heis2):
    sm, reps = heis2
    assert all(r.unique and not r.obstruction for r in reps)
    assert es.matches_metric(sm, oracle_in_model_chart())
    assert sm.coeffs == {} or all(not c for tab in sm.coeffs.values() for c in tab.values())
    assert reps[0].residual_weight is None


def test_signature_branches(heis2):
    sm, _ = heis2
    assert es.signature_branch(sm, Fraction(1, 100)) == (4, 0)
    assert es.signature_branch(sm, Fraction(-1, 100)) == (2, 2)
    with pytest.raises(DomainError):
        es.signature_branch(sm, 0)
    with pytest.raises(DomainError):
        es.signature_branch(sm, Fraction(1, 2))


def test_order_bound():
    with pytest.raises(ConfigError):
        es.solve_to_order(heisenberg_cr(), 4)


def test_transported_model_has_zero_corrections():
    sm, reps = es.solve_to_order(transported_heisenberg(), 1)
    assert all(r.unique for r in reps)
    assert all(not c for tab in sm.coeffs.values() for c in tab.values())
    assert reps[-1].residual_weight is None


def test_genuine_deformation_is_determined():
    cr = perturbed_cr([ZERO, ZERO, u * u])
    sm, reps = es.solve_to_order(cr, 1)
    assert all(r.unique and not r.obstruction for r in reps)
    assert any(c for tab in sm.coeffs.values() for c in tab.values())
    assert reps[-1].residual_weight >= 2


def test_report_dict_keys(heis2):
    d = heis2[1][1].as_dict()
    assert {"order", "rows", "cols", "rank", "unique", "log_obstruction", "residual_weight"} <= set(d)
    assert d["square"] == (d["rank"] == d["cols"])


def test_nonpolynomial_data_rejected():
    one = RatFunc.const(CR, 1)
    cr = perturbed_cr([ZERO, RatFunc.from_poly(u * v) / (one + RatFunc.from_poly(s * s)), ZERO])
    with pytest.raises(ConfigError):
        es.ansatz(cr, 1)


def test_laurent_conversion():
    x = MPoly.var(ASYM, "x")
    p = MPoly.monomial(ASYM, (-2, 0, 1, 0)) + x
    X = RatFunc.var(ASYM, "x")
    assert es.laurent_to_ratfunc(p) == RatFunc.var(ASYM, "u") / (X * X) + X


def test_rescaled_coframe_changes_nothing():
    """theta -> (1 + uv) theta keeps the CR structure and the Levi metric."""
    sm, reps = es.solve_to_order(perturbed_cr([ZERO, u * v, ZERO]), 1)
    assert all(not c for tab in sm.coeffs.values() for c in tab.values())


def test_eta_perturbation_caps_the_t_order():
    """A real eta perturbation lowers frame weights; the solve stops before truncated orders leak in."""
    cr = perturbed_cr([ZERO, ZERO, ZERO], [u * v * Fraction(1, 3), ZERO, ZERO])
    sm, reps = es.solve_to_order(cr, 2)
    assert sm.t_order == 2 * 2 + 2 < 2 * 2 + sm.max_degree
    assert all(r.unique and not r.obstruction for r in reps)
    assert reps[-1].residual_weight >= 3


def test_theta_perturbation_keeps_full_t_order():
    sm = es.ansatz(perturbed_cr([ZERO, ZERO, u * u]), 2)
    assert es.clean_t_order(sm) == 2 * 2 + sm.max_degree
