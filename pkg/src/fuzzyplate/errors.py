"""Exception types raised across the package."""


class FuzzyPlateError(Exception):
    """Base class for all package errors."""


class ValidationError(FuzzyPlateError, ValueError):
    """An input violates a type invariant (bad TFN, grid, config field...)."""

    def __init__(self, message, field=None):
        self.field = field
        if field:
            message = f"{field}: {message}"
        super().__init__(message)


class DomainError(FuzzyPlateError, ArithmeticError):
    """Interval operation outside its domain (e.g. divisor contains zero)."""


class InstabilityError(FuzzyPlateError):
    """The requested march violates the explicit-scheme stability bound."""

    def __init__(self, message, d_hi=None, alpha=None):
        self.d_hi = d_hi
        self.alpha = alpha
        super().__init__(message)


class VerificationError(FuzzyPlateError):
    """An oracle cross-check failed."""
