"""Space-time Galerkin boundary elements for the 1D heat equation."""

from ._heatbem import (
    BoundaryMesh,
    ConfigError,
    NumericalError,
    Problem,
    Side,
    adaptive_study,
    assemble_operators,
    assemble_rhs,
    condition_number,
    evaluate_interior,
    example_problem,
    fundamental_solution,
    gmres,
    primitive_I0,
    primitive_J0,
    reference_flux,
    refine_adaptive,
    refine_uniform,
    solve,
    uniform_mesh,
    uniform_study,
)

__all__ = [
    "BoundaryMesh",
    "ConfigError",
    "NumericalError",
    "Problem",
    "Side",
    "adaptive_study",
    "assemble_operators",
    "assemble_rhs",
    "condition_number",
    "evaluate_interior",
    "example_problem",
    "fundamental_solution",
    "gmres",
    "primitive_I0",
    "primitive_J0",
    "reference_flux",
    "refine_adaptive",
    "refine_uniform",
    "solve",
    "uniform_mesh",
    "uniform_study",
]
