"""Exactly solvable radial harmonic oscillator with position-dependent mass.

Closed-form spectra and eigenfunctions for the constant-mass oscillator and
its deformation with mass (1 + alpha r^2)^-2, matrices of the generators of
their spectrum-generating algebras in the truncated eigenbasis, and an
independent finite-difference eigensolver.
"""

from .algebra import (
    anticommutator,
    commutator,
    default_parameter_sets,
    verify,
    verify_deformed,
    verify_limit,
    verify_qj3,
    verify_su11,
)
from .errors import DomainError, NumericalError, ParameterError, SingularityError
from .gridops import (
    OperatorMatrix,
    RadialGrid,
    apply_operator,
    build_deformed_ladders,
    build_grid,
    build_matrix,
    default_grid,
    delta_matrix,
)
from .oracle import compare_to_analytic, discretize, line_spectrum, solve_spectrum
from .params import OscParams, delta_eigenvalue, derive_params, lowest_weights
from .report import RelationResidual, VerificationReport
from .states import (
    casimir_value_const,
    casimir_value_pdm,
    energy,
    energy_const,
    energy_pdm,
    eval_psi,
    profiles,
    sample_state,
)

__version__ = "0.1.0"

__all__ = [
    "OscParams",
    "derive_params",
    "delta_eigenvalue",
    "lowest_weights",
    "energy",
    "energy_const",
    "energy_pdm",
    "eval_psi",
    "profiles",
    "sample_state",
    "casimir_value_const",
    "casimir_value_pdm",
    "RadialGrid",
    "OperatorMatrix",
    "build_grid",
    "default_grid",
    "apply_operator",
    "build_matrix",
    "delta_matrix",
    "build_deformed_ladders",
    "commutator",
    "anticommutator",
    "verify",
    "verify_su11",
    "verify_qj3",
    "verify_deformed",
    "verify_limit",
    "default_parameter_sets",
    "discretize",
    "solve_spectrum",
    "compare_to_analytic",
    "line_spectrum",
    "RelationResidual",
    "VerificationReport",
    "ParameterError",
    "DomainError",
    "NumericalError",
    "SingularityError",
]
