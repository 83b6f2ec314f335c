"""Dirichlet eigenvalue estimates on rotationally symmetric balls via exit-time moments."""

from .bounds import (
    bessa_montenegro_bound,
    cheung_leung_bound,
    extrinsic_lower,
    extrinsic_upper,
    intrinsic_ordering_check,
    l_r_bound,
    mckean_bound,
    space_form_bounds,
)
from .comparison import (
    BoundingFunctions,
    ComparisonSpaceSpec,
    balance_check,
    build_comparison_space,
    transplanted_convexity_check,
)
from .errors import EigenmomentError
from .growth import lambda1_growth, reconcile
from .moments import (
    EigenEstimate,
    GreenOperator,
    MomentHierarchy,
    build_hierarchy,
    green_apply,
    lambda1_sandwich,
    moment,
    torsional_bounds,
    torsional_rigidity,
)
from .quadrature import RadialGrid, RadialSamples, uniform_grid
from .warping import ModelSpace, WarpingFunction, eta, space_form_warping, tabulated_warping

__all__ = [
    "BoundingFunctions",
    "ComparisonSpaceSpec",
    "EigenEstimate",
    "EigenmomentError",
    "GreenOperator",
    "ModelSpace",
    "MomentHierarchy",
    "RadialGrid",
    "RadialSamples",
    "WarpingFunction",
    "balance_check",
    "bessa_montenegro_bound",
    "build_comparison_space",
    "build_hierarchy",
    "cheung_leung_bound",
    "eta",
    "extrinsic_lower",
    "extrinsic_upper",
    "green_apply",
    "intrinsic_ordering_check",
    "l_r_bound",
    "lambda1_growth",
    "lambda1_sandwich",
    "mckean_bound",
    "moment",
    "reconcile",
    "space_form_bounds",
    "space_form_warping",
    "tabulated_warping",
    "torsional_bounds",
    "torsional_rigidity",
    "transplanted_convexity_check",
    "uniform_grid",
]
