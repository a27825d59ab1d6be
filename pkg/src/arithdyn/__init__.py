"""Exact arithmetic for discrete integrable equations over finite fields,
p-adic rationals and rational-function fields."""

__version__ = "0.1.0"

from .fields import FFElem, FiniteField, ProjValue, make_field, proj_div
from .padic import PadicContext, Rat
from .funcfield import Poly, RatFunc, reduce_at, reduce_strict, reduce_tracked
from .linalg import det
from .maps import (
    DP2Schedule,
    FFBackend,
    MapSpec,
    RatFuncBackend,
    RationalBackend,
    Trajectory,
    dp2_extended_step,
    dp2_map,
    evolve,
    step,
)

__all__ = [
    "FFElem", "FiniteField", "ProjValue", "make_field", "proj_div",
    "PadicContext", "Rat",
    "Poly", "RatFunc", "reduce_at", "reduce_strict", "reduce_tracked",
    "det",
    "DP2Schedule", "FFBackend", "MapSpec", "RatFuncBackend", "RationalBackend",
    "Trajectory", "dp2_extended_step", "dp2_map", "evolve", "step",
]
