"""Exact three-well Bose-Hubbard dynamics, torus classification and two-state oscillations."""

from bhtrimer.model_core import (
    ModelParams,
    FockState,
    FockBasis,
    EigenSolution,
    enumerate_basis,
    hamiltonian_element,
    build_hamiltonian,
    diagonalize,
    solve,
    number_matrix_element,
    number_operator_matrices,
)
from bhtrimer.errors import (
    TrimerError,
    InvalidParameterError,
    ConvergenceError,
    InsufficientDataError,
    UnsupportedCaseError,
    ConfigError,
    StateSpecError,
    CacheError,
    ResolutionError,
)

__version__ = "0.1.0"

__all__ = [
    "ModelParams",
    "FockState",
    "FockBasis",
    "EigenSolution",
    "enumerate_basis",
    "hamiltonian_element",
    "build_hamiltonian",
    "diagonalize",
    "solve",
    "number_matrix_element",
    "number_operator_matrices",
    "TrimerError",
    "InvalidParameterError",
    "ConvergenceError",
    "InsufficientDataError",
    "UnsupportedCaseError",
    "ConfigError",
    "StateSpecError",
    "CacheError",
    "ResolutionError",
]
