"""A-optimal designs for scalar-on-function linear models."""

from ._fdoe import (
    Basis,
    BasisKind,
    Bounds,
    Design,
    IdentifiabilityError,
    InfeasibleDesignError,
    OptimizerConfig,
    OptimizerResult,
    ProblemSpec,
    ProfileFactor,
    ScalarEffects,
    ScalarFactor,
    a_criterion,
    a_efficiency,
    build_model_matrix,
    coordinate_exchange,
    cross_integral,
    eval_basis,
    evaluate_design,
    exhaustive_vertex_search,
    information_matrix,
    least_squares_estimate,
    make_uniform_grid,
    quad_cross_integral,
)

__all__ = [name for name in dir() if not name.startswith("_")]
