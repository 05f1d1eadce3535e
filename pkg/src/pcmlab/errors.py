"""Exception types shared across the package."""

from __future__ import annotations


class PcmLabError(Exception):
    """Base class for all package errors."""


class MatrixError(PcmLabError, ValueError):
    """Invalid matrix, vector, or scale input."""


class MeasureDomainError(PcmLabError, ValueError):
    """A consistency measure was asked for outside its domain."""


class ConvergenceError(PcmLabError, RuntimeError):
    """Power iteration did not reach the requested residual.

    Carries the last iterate so callers can inspect how far it got.
    """

    def __init__(self, message: str, last_vector=None, lambda_estimate: float | None = None):
        super().__init__(message)
        self.last_vector = last_vector
        self.lambda_estimate = lambda_estimate


class OptimizerError(PcmLabError, RuntimeError):
    """Descent failed to converge within its iteration budget.

    Carries the best iterate found so far.
    """

    def __init__(self, message: str, best_vector=None, best_objective: float | None = None):
        super().__init__(message)
        self.best_vector = best_vector
        self.best_objective = best_objective


class ConfigError(PcmLabError, ValueError):
    """Invalid simulation or CLI configuration."""


class DegenerateBinsError(PcmLabError, ValueError):
    """Quantile bin edges collapsed (tied measure values)."""
