"""Exception hierarchy shared by every scqm module."""


class ScqmError(Exception):
    """Base class for all errors raised by scqm."""


class DimensionError(ScqmError, ValueError):
    """Shapes are inconsistent, not square, or exceed the configured maximum."""


class NotHermitianError(ScqmError, ValueError):
    pass


class SingularMatrixError(ScqmError, ValueError):
    """Matrix is singular or too ill-conditioned to invert reliably."""


class ConvergenceError(ScqmError, ArithmeticError):
    pass


class BasisError(ScqmError, ValueError):
    """Invalid request for a basis representation (odd grid, missing P, ...)."""


class ConfigError(ScqmError, ValueError):
    """Run configuration failed schema validation."""
