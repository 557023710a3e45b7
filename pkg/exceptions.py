"""
Error hierarchy for the quench dynamics toolkit.
Each error carries a stable code (used in API responses) and a CLI exit code.
"""

from typing import Any, Dict, Optional


class QuenchDynamicsError(Exception):
    """Base class for every error raised by this package."""
    code: str = "QUENCH_ERROR"
    exit_code: int = 1

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_dict(self) -> Dict[str, Any]:
        """Convert to an error response payload."""
        payload: Dict[str, Any] = {"error": self.code, "message": self.message}
        if self.details:
            payload["details"] = self.details
        return payload


# =====================================================================
# Configuration errors (exit code 1)
# =====================================================================

class ConfigError(QuenchDynamicsError, ValueError):
    """Invalid configuration or scenario file."""
    code = "CONFIG_ERROR"
    exit_code = 1


class InvalidQuenchError(ConfigError):
    """The quench has no normalizable initial ground state or a non-static field."""
    code = "INVALID_QUENCH"


class InvalidArgumentError(ConfigError):
    """An argument lies outside the domain of an operation."""
    code = "INVALID_ARGUMENT"


# =====================================================================
# Numeric errors (exit code 2)
# =====================================================================

class NumericError(QuenchDynamicsError, ArithmeticError):
    """A computation could not be carried out reliably."""
    code = "NUMERIC_ERROR"
    exit_code = 2


class DegenerateContinuationError(NumericError):
    """Post-quench frequency-squared sits on the oscillatory/hyperbolic threshold."""
    code = "DEGENERATE_CONTINUATION"


class ErmakovSingularityError(NumericError):
    """The Ermakov scale collapsed towards zero during integration."""
    code = "ERMAKOV_SINGULARITY"


class InsufficientGridError(NumericError):
    """Quadrature results moved under grid refinement."""
    code = "INSUFFICIENT_GRID"


class NonPositiveDefiniteError(NumericError):
    """A Gaussian quadratic form is not positive definite."""
    code = "NON_POSITIVE_DEFINITE"


# =====================================================================
# Validation failures (exit code 3)
# =====================================================================

class ValidationFailedError(QuenchDynamicsError):
    """One or more validation checks failed."""
    code = "VALIDATION_FAILED"
    exit_code = 3
