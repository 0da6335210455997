"""Hypothesis strategies for small exact objects."""
from fractions import Fraction

from hypothesis import strategies as st

from crtwistor.symalg import GaussRat, MPoly, TSeries

VARS = ("x", "y", "z")

rationals = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))
gauss = st.builds(GaussRat, rationals, rationals)
exps = st.tuples(*(st.integers(0, 3) for _ in VARS))


@st.composite
def polys(draw, variables=VARS, max_terms=4):
    terms = draw(st.dictionaries(st.tuples(*(st.integers(0, 3) for _ in variables)), gauss, max_size=max_terms))
    return MPoly(variables, terms)


@st.composite
def unit_series(draw, var="t", order=5):
    """Series with a nonzero constant coefficient, constant in the base."""
    c0 = draw(gauss.filter(bool))
    rest = draw(st.dictionaries(st.integers(1, order), gauss, max_size=3))
    return TSeries(var, (), {0: c0, **rest}, order)
