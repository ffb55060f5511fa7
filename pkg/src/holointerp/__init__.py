"""Nonlinear interpolation of analytic maps between weighted sequence spaces.

Computes the full scale of complex-interpolation norms for weighted
couples, extracts homogeneous components of analytic maps by discretized
Cauchy integrals with certified aliasing bounds, and verifies the
interpolated bounds (geometric-mean constants for homogeneous maps, the
R/(R-r) ball bound for analytic maps) against built-in oracle maps.
"""

from .analytic import (
    AnalyticMap,
    Extraction,
    HomogeneousComponent,
    MapContractError,
    RhoDeviation,
    SeriesTruncation,
    aliasing_tail,
    component_norm_bound,
    extract_component,
    rho_independence_check,
    truncated_series,
)
from .interpolate import (
    BallSampler,
    BoundSpec,
    EstimatedConstants,
    ReportRow,
    VerificationReport,
    default_theta_grid,
    estimate_constants,
    lemma_bound,
    theorem1_bound,
    verify_lemma,
    verify_theorem1,
)
from .spaces import (
    ThetaNorm,
    WeightedCouple,
    couple_from_json,
    couple_to_json,
    interpolation_inequality_check,
    make_weights,
    normalize_couple,
    theta_norm,
    theta_weights,
)
from .strip import (
    ComparisonFunction,
    StripFunction,
    default_t_grid,
    f_space_norm,
    lemma_comparison_function,
    optimal_strip_function,
    three_lines_check,
)
from .testmaps import (
    CauchyConvolutionTruncated,
    ComponentwiseGeometric,
    DiagonalLinear,
    DiagonalMonomial,
    OracleMap,
    RankOneQuadratic,
    ball_constants,
    oracle_constants,
    to_analytic,
)

__version__ = "0.1.0"
