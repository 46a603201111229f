"""Exception types raised by the library."""


class InfSupError(Exception):
    """Base class for all library errors."""


class InvalidParameterError(InfSupError, ValueError):
    """Non-positive degree, mesh count or domain size."""


class DomainError(InfSupError, ValueError):
    """Evaluation point outside the reference interval."""


class ShapeError(InfSupError, ValueError):
    """Inconsistent array shapes, or a matrix that should be symmetric is not."""


class NotPSDError(InfSupError, ValueError):
    """Matrix has a negative eigenvalue below the rank cutoff."""


class NumericalFailureError(InfSupError, ArithmeticError):
    """An iteration failed to converge."""


class NoPositiveSingularValueError(InfSupError, ArithmeticError):
    """Every singular value lies at or below the rank cutoff."""


class ConfigError(InfSupError, ValueError):
    """Invalid sweep configuration."""
