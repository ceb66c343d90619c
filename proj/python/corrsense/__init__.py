"""Error exponents for detecting classical correlations among optical detectors."""

from ._core import (
    CorrsenseError,
    DomainError,
    IoError,
    NumericalInstabilityError,
    ResourceError,
    SingularityError,
    UsageError,
    correlated_state,
    exponent,
    exponents,
    func_f,
    gordon_g,
    quantum_covariance,
    simulate,
    sweep,
    symplectic_eigenvalues,
    taylor_coefficient,
    thermal_state,
    validate,
    von_neumann_entropy,
)

__all__ = [
    "CorrsenseError",
    "DomainError",
    "IoError",
    "NumericalInstabilityError",
    "ResourceError",
    "SingularityError",
    "UsageError",
    "correlated_state",
    "exponent",
    "exponents",
    "func_f",
    "gordon_g",
    "quantum_covariance",
    "simulate",
    "sweep",
    "symplectic_eigenvalues",
    "taylor_coefficient",
    "thermal_state",
    "validate",
    "von_neumann_entropy",
]
