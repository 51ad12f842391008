"""Exact central hyperplane sections of the cube [-1, 1]^n.

The (n-1)-volume of the section through the origin perpendicular to a
unit vector equals 2^n times the density at 0 of the weighted sum of
independent uniform variables on [-1, 1].  This package builds that
density exactly as a piecewise polynomial, derives section volumes, cone
decompositions and criticality residuals from it, searches the sphere
for critical directions, and cross-checks everything against oscillatory
quadrature and Monte Carlo oracles.
"""

from .casework import (
    INTERIOR_BOUND_TRIPLE,
    Case,
    QuadResidual,
    TripleRoot,
    gaussian_heuristic,
    gaussian_heuristic_match,
    n3_cyclic_sum,
    n3_identity_check,
    n3_relation,
    n4_case_balance,
    n4_case_dispatch,
    n4_case_residual,
    n4_system_triple_equations,
    n4_system_unequal_equations,
    pairwise_balance,
    solve_n4_system_triple,
    solve_n4_system_unequal,
)
from .criticality import (
    ConeBalance,
    CriticalityReport,
    cone_balance,
    criticality_residuals,
    grad_sinc_product_integral,
    interior_condition,
    sinc_product_integral,
)
from .density import (
    MAX_CLOSED_FORM_WEIGHTS,
    cdf_at,
    characteristic_function,
    density_at,
    density_by_convolution,
    density_closed_form,
    eval_cdf,
    eval_density,
)
from .oracles import (
    MonteCarloEstimate,
    QuadratureConfig,
    clt_diagonal_asymptote,
    monte_carlo_section,
    sinc_product_quadrature,
    worker_count,
)
from .piecewise import PiecewisePolynomial
from .search import (
    CriticalPoint,
    ScanConfig,
    canonicalize,
    classify_critical_point,
    refine_critical,
    scan,
)
from .sections import (
    SectionReport,
    central_volume,
    cone_volume,
    diagonal_direction,
    diagonal_section_volume,
    facet_section_volume,
    normalized_section,
    parallel_section,
    section_report,
    slab_identity_check,
)
from .weights import (
    InvalidInputError,
    ReducedWeights,
    as_unit_vector,
    as_weight_vector,
    nonzero_weights,
    reduce_weights,
)

__version__ = "0.1.0"

__all__ = [
    "Case",
    "ConeBalance",
    "CriticalPoint",
    "CriticalityReport",
    "INTERIOR_BOUND_TRIPLE",
    "InvalidInputError",
    "MAX_CLOSED_FORM_WEIGHTS",
    "MonteCarloEstimate",
    "PiecewisePolynomial",
    "QuadResidual",
    "QuadratureConfig",
    "ReducedWeights",
    "ScanConfig",
    "SectionReport",
    "TripleRoot",
    "as_unit_vector",
    "as_weight_vector",
    "canonicalize",
    "cdf_at",
    "central_volume",
    "characteristic_function",
    "classify_critical_point",
    "clt_diagonal_asymptote",
    "cone_balance",
    "cone_volume",
    "criticality_residuals",
    "density_at",
    "density_by_convolution",
    "density_closed_form",
    "diagonal_direction",
    "diagonal_section_volume",
    "eval_cdf",
    "eval_density",
    "facet_section_volume",
    "gaussian_heuristic",
    "gaussian_heuristic_match",
    "grad_sinc_product_integral",
    "interior_condition",
    "monte_carlo_section",
    "n3_cyclic_sum",
    "n3_identity_check",
    "n3_relation",
    "n4_case_balance",
    "n4_case_dispatch",
    "n4_case_residual",
    "n4_system_triple_equations",
    "n4_system_unequal_equations",
    "nonzero_weights",
    "normalized_section",
    "pairwise_balance",
    "parallel_section",
    "reduce_weights",
    "refine_critical",
    "scan",
    "section_report",
    "sinc_product_integral",
    "sinc_product_quadrature",
    "slab_identity_check",
    "solve_n4_system_triple",
    "solve_n4_system_unequal",
    "worker_count",
]
