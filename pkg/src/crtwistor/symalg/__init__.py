"""Exact arithmetic over the Gaussian rationals."""
from .gauss import ONE, ZERO, GaussRat, I, Rat
from .mpoly import MPoly
from .ratfunc import RatFunc, factor
from .series import INF, TSeries, expand
from .textform import dumps, loads

__all__ = [
    "Rat", "GaussRat", "ZERO", "ONE", "I", "MPoly", "RatFunc", "factor",
    "TSeries", "INF", "expand", "dumps", "loads",
]
