"""Riccati equation solvers for transport theory."""

from ._core import (  # noqa: F401
    NareError,
    TransportProblem,
    certify_m_matrix,
    default_shift,
    eigenvalues_m,
    eigenvalues_m_shifted,
    g_functions,
    normalized_residual,
    problem_from_nodes,
    quadrature_problem,
    sda,
    shifted_coefficients,
    si,
    solution_identities,
)

__all__ = [name for name in dir() if not name.startswith("_")]
