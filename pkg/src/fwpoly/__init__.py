"""Projection-free convex optimization over vertex-represented polytopes.

Standard and away-step Frank-Wolfe solvers, linear-minimization oracles with
exact and adversarially inexact variants, affine-invariant curvature and
strong-convexity constants, polytope width computations, and a reproducible
experiment harness that audits the solvers' linear-convergence guarantees.
"""

from .afw import apply_away_update, apply_fw_update, gamma_max, select_direction, solve_afw
from .core import (
    ActiveSet,
    ConfigurationError,
    ConstantEstimates,
    FWError,
    FunctionObjective,
    IterateRecord,
    NumericError,
    Objective,
    QuadraticObjective,
    RunTrace,
    SolverConfig,
    StructuralError,
    UnsupportedOperationError,
    VPolytope,
    active_set_point,
    gradient_check,
    l1_ball,
    simplex,
    box,
    unit_box,
)
from .fw import solve_fw
from .geometry import (
    bound_checks,
    curvature_quadratic_exact,
    curvature_sampled,
    directional_width,
    enumerate_proper_supports,
    estimate_constants,
    interior_radius,
    mu_away_estimate,
    mu_fw_estimate,
    pyramidal_dir_width,
    pyramidal_width_estimate,
    rate_constants,
    ray_boundary_intersection,
    worst_case_away_vertex,
)
from .harness import (
    ProblemSpec,
    RateFit,
    affine_invariance_check,
    fit_geometric_rate,
    generate_problem,
    load_problem,
    run_experiment,
)
from .linesearch import exact_quadratic, golden_section, rule_afw, rule_fw
from .oracles import OracleAnswer, away_vertex, fw_gap, inexact_lmo, lmo, pairwise_gap

__version__ = "0.1.0"

__all__ = [
    "ActiveSet", "ConfigurationError", "ConstantEstimates", "FWError",
    "FunctionObjective", "IterateRecord", "NumericError", "Objective",
    "OracleAnswer", "ProblemSpec", "QuadraticObjective", "RateFit", "RunTrace",
    "SolverConfig", "StructuralError", "UnsupportedOperationError", "VPolytope",
    "active_set_point", "affine_invariance_check", "apply_away_update",
    "apply_fw_update", "away_vertex", "bound_checks", "box",
    "curvature_quadratic_exact", "curvature_sampled", "directional_width",
    "enumerate_proper_supports", "estimate_constants", "exact_quadratic",
    "fit_geometric_rate", "fw_gap", "gamma_max", "generate_problem",
    "golden_section", "gradient_check", "inexact_lmo", "interior_radius",
    "l1_ball", "lmo", "load_problem", "mu_away_estimate", "mu_fw_estimate",
    "pairwise_gap", "pyramidal_dir_width", "pyramidal_width_estimate",
    "rate_constants", "ray_boundary_intersection", "rule_afw", "rule_fw",
    "run_experiment", "select_direction", "simplex", "solve_afw", "solve_fw",
    "unit_box", "worst_case_away_vertex",
]
