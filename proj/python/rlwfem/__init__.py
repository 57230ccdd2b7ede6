"""Periodic Lagrange FE spaces, structured L2 projections, and a conservative RLW solver."""

from ._core import (
    FeFunction,
    FeSpace,
    GramOperator,
    Invariants,
    NumericalError,
    RlwState,
    RlwSystem,
    assemble_rlw,
    block_circulant_solve,
    bubble_basis,
    circulant_solve,
    dichotomy_norm,
    eval_basis,
    evolve,
    gauss_rule,
    gram_eigenvalues_s1,
    h1_semi_error,
    initial_state,
    interpolate,
    l2_norm_error,
    l2_project,
    make_space,
    manufactured_forcing,
    manufactured_solution,
    manufactured_solution_dx,
    project_fe_derivative,
    psi,
    psi_prime,
)

__all__ = [
    "FeFunction",
    "FeSpace",
    "GramOperator",
    "Invariants",
    "NumericalError",
    "RlwState",
    "RlwSystem",
    "assemble_rlw",
    "block_circulant_solve",
    "bubble_basis",
    "circulant_solve",
    "dichotomy_norm",
    "eval_basis",
    "evolve",
    "gauss_rule",
    "gram_eigenvalues_s1",
    "h1_semi_error",
    "initial_state",
    "interpolate",
    "l2_norm_error",
    "l2_project",
    "make_space",
    "manufactured_forcing",
    "manufactured_solution",
    "manufactured_solution_dx",
    "project_fe_derivative",
    "psi",
    "psi_prime",
]
