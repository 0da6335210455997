from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crtwistor.errors import NotAUnitError, PoleError
from crtwistor.symalg import GaussRat, MPoly, RatFunc, TSeries, dumps, expand, loads
from crtwistor.symalg.linalg import nullspace, rank, solve
from crtwistor.symalg.upoly import count_roots, signature

from strategies import VARS, gauss, polys, unit_series

I = GaussRat(0, 1)
x, y, z = MPoly.gens(VARS)


# ------------------------------------------------------------ GaussRat
def test_i_squared():
    assert I * I == -1


def test_inverse_and_parse():
    a = GaussRat(Fraction(3, 2), -2)
    assert a * a.inverse() == 1
    assert GaussRat.parse(str(a)) == a


def test_zero_inverse_raises():
    with pytest.raises(ZeroDivisionError):
        GaussRat(0).inverse()


@given(gauss, gauss, gauss)
@settings(max_examples=300)
def test_gauss_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b).conj() == a.conj() * b.conj()
    if a:
        assert a / a == 1


# --------------------------------------------------------------- MPoly
@given(polys(), polys(), polys())
@settings(max_examples=1000, deadline=None)
def test_ring_axioms(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p - p == MPoly.zero(VARS)
    assert p * 1 == p


@given(polys(), polys(), st.sampled_from(VARS))
@settings(max_examples=1000, deadline=None)
def test_leibniz(p, q, name):
    assert (p * q).diff(name) == p.diff(name) * q + p * q.diff(name)


@given(polys(), polys())
@settings(max_examples=200, deadline=None)
def test_eval_is_ring_map(p, q):
    pt = {"x": Fraction(1, 3), "y": GaussRat(2, -1), "z": -2}
    assert (p * q).eval(pt) == p.eval(pt) * q.eval(pt)
    assert (p + q).eval(pt) == p.eval(pt) + q.eval(pt)


def test_grlex_structural_equality():
    assert x * y + y * x == MPoly(VARS, {(1, 1, 0): 2})
    assert hash(x + y) == hash(y + x)


def test_divmod_exact():
    q, r = ((x + y) * (x - y)).divmod(x - y)
    assert q == x + y and r.is_zero()


def test_subs():
    p = x * x + y
    assert p.subs({"x": y + 1}) == y * y + y * 3 + 1


def test_extend_aligns_variables():
    a = MPoly.var(("x",), "x")
    b = MPoly.var(("y",), "y")
    assert (a + b).vars == ("x", "y")


# ------------------------------------------------------------- RatFunc
X = RatFunc.var(VARS, "x")
Y = RatFunc.var(VARS, "y")


def test_ratfunc_cancels():
    f = (X * X - Y * Y) / (X - Y)
    assert f.is_polynomial() and f == X + Y


def test_ratfunc_quotient_rule():
    f = X / (X + Y)
    assert f.diff("x") == Y / ((X + Y) ** 2)


def test_ratfunc_pole_on_eval():
    with pytest.raises((PoleError, ZeroDivisionError)):
        (RatFunc.const(VARS, 1) / X).eval({"x": 0, "y": 1, "z": 0})


@given(polys(max_terms=3), polys(max_terms=2).filter(lambda p: not p.is_zero()))
@settings(max_examples=100, deadline=None)
def test_ratfunc_field(p, q):
    f = RatFunc.from_poly(p) / RatFunc.from_poly(q)
    assert f * RatFunc.from_poly(q) == RatFunc.from_poly(p)
    if not p.is_zero():
        assert f * f.inverse() == RatFunc.const(VARS, 1)


@given(polys(max_terms=3), polys(max_terms=3), st.sampled_from(VARS))
@settings(max_examples=60, deadline=None)
def test_ratfunc_leibniz(p, q, name):
    f = RatFunc.from_poly(p) / (RatFunc.from_poly(q) * RatFunc.from_poly(q) + 1)
    g = RatFunc.from_poly(q)
    assert (f * g).diff(name) == f.diff(name) * g + f * g.diff(name)


# --------------------------------------------------------------- TSeries
@given(unit_series(), unit_series())
@settings(max_examples=300, deadline=None)
def test_series_field_ops(a, b):
    assert (a * b) * b.inverse() == a
    assert (a / b) * b == a
    assert (a + b) * a == a * a + b * a


def test_series_known_order():
    t = TSeries.gen("t", (), 3)
    s = (1 - t).inverse()
    assert s == TSeries("t", (), {0: 1, 1: 1, 2: 1, 3: 1}, 3)


def test_series_sqrt_and_revert():
    t = TSeries.gen("t", (), 4)
    s = (1 + t).sqrt()
    assert (s * s) == 1 + t
    f = t + t * t * 2
    assert f.compose(f.revert()) == t


def test_series_inverse_needs_unit():
    with pytest.raises((NotAUnitError, ZeroDivisionError, ValueError)):
        TSeries("t", ("x",), {0: MPoly.var(("x",), "x") + 1}, 3).inverse()


def test_monomial_coefficients_are_units():
    s = TSeries("t", ("x",), {0: MPoly.var(("x",), "x")}, 3)
    assert s.inverse().coeff(0) == MPoly.var(("x",), "x", -1)


@given(polys(("x", "t"), 3), polys(("x", "t"), 3))
@settings(max_examples=150, deadline=None)
def test_expand_commutes_with_arithmetic(p, q):
    """Expanding a rational function in t commutes with products and sums."""
    one = MPoly.const(("x", "t"), 1)
    den = RatFunc.from_poly(one + MPoly.var(("x", "t"), "t") * q.subs({"t": 0}) + MPoly.var(("x", "t"), "t") ** 2)
    f = RatFunc.from_poly(p) / den
    g = RatFunc.from_poly(q) / den
    n = 4
    assert expand(f * g, "t", n) == (expand(f, "t", n) * expand(g, "t", n)).truncate(n)
    assert expand(f + g, "t", n) == expand(f, "t", n) + expand(g, "t", n)
    assert expand(f.diff("x"), "t", n) == expand(f, "t", n).diff("x")


def test_expand_then_evaluate_matches_taylor():
    t = RatFunc.var(("t",), "t")
    f = (1 + t) / (1 - t * 2)
    s = expand(f, "t", 5)
    assert [s.coeff(k).constant_value() for k in range(6)] == [1, 3, 6, 12, 24, 48]


# -------------------------------------------------------------- textform
@given(polys())
@settings(max_examples=200, deadline=None)
def test_text_roundtrip_mpoly(p):
    assert loads(dumps(p)) == p


def test_text_roundtrip_ratfunc_and_series():
    f = (X + I) / (X * Y - 1) ** 2
    assert loads(dumps(f)) == f
    s = expand(f.subs({"y": 0}), "x", 3)
    back = loads(dumps(s))
    assert back == s and back.order == s.order


# ---------------------------------------------------------------- linalg
def test_solve_and_nullspace():
    A = [[1, 2, 3], [2, 4, 6], [1, 0, 1]]
    assert rank(A) == 2
    ns = nullspace(A)
    assert len(ns) == 1
    assert all(sum((GaussRat.coerce(a) * v for a, v in zip(row, ns[0])), GaussRat(0)) == 0 for row in A)
    r = solve(A, [1, 2, 0])
    assert r.consistent and not r.unique
    assert not solve(A, [1, 3, 0]).consistent


def test_sturm_signature():
    assert signature([[1, 0], [0, -1]]) == (1, 1, 0)
    assert signature([[2, 1], [1, 2]]) == (2, 0, 0)
    assert count_roots([-2, 0, 1]) == 2  # t^2 - 2
