"""Spectral counting, trace growth, and multiplier bounds for the
Engel and Cartan model operators."""

from .groups import Group, GroupElement, dilate, identity, inverse, multiply, vector_field
from .diffops import Poly, PolyDiffOp, commutator
from .representation import (
    DualPoint,
    GridFunction,
    ShiftAlignmentError,
    apply_rep,
    gaussian,
    symbol_vector_field,
)
from .schrodinger import (
    Potential,
    SchrodingerOp,
    TridiagSystem,
    auto_domain,
    build_symbol_cartan,
    build_symbol_engel,
    build_symbol_generalized,
    count_at_dual_point,
    discretize,
    eigenvalues_below,
    rescale,
    sturm_count,
)
from .weyl import WeylSymbol, counting_bound_check, phase_space_volume, sublevel_intervals, weyl_ratio
from .dualtrace import DualRegion, GrowthFit, TraceEstimate, growth_exponent, region_for, trace_estimate
from .multiplier import (
    ExponentPair,
    PhiFunction,
    end_to_end_bound,
    heat_decay,
    sobolev_check,
    sup_bound,
)

__version__ = "0.1.0"

__all__ = [
    "Group",
    "GroupElement",
    "multiply",
    "inverse",
    "dilate",
    "identity",
    "vector_field",
    "Poly",
    "PolyDiffOp",
    "commutator",
    "DualPoint",
    "GridFunction",
    "ShiftAlignmentError",
    "apply_rep",
    "gaussian",
    "symbol_vector_field",
    "Potential",
    "SchrodingerOp",
    "TridiagSystem",
    "build_symbol_engel",
    "build_symbol_cartan",
    "build_symbol_generalized",
    "discretize",
    "sturm_count",
    "eigenvalues_below",
    "auto_domain",
    "count_at_dual_point",
    "rescale",
    "WeylSymbol",
    "sublevel_intervals",
    "phase_space_volume",
    "weyl_ratio",
    "counting_bound_check",
    "DualRegion",
    "TraceEstimate",
    "GrowthFit",
    "region_for",
    "trace_estimate",
    "growth_exponent",
    "ExponentPair",
    "PhiFunction",
    "sup_bound",
    "sobolev_check",
    "heat_decay",
    "end_to_end_bound",
    "__version__",
]
