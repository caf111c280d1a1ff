"""Exception and warning types raised across the package."""


class WeylabError(Exception):
    """Base class for all package errors."""


class InvalidParameterError(WeylabError, ValueError):
    pass


class GridMismatchError(WeylabError, ValueError):
    pass


class EmptyRegionError(WeylabError, ValueError):
    pass


class MidpointError(WeylabError, ValueError):
    """Raised when midpoints of the configuration grid cannot be represented (odd N)."""


class NumericError(WeylabError, ArithmeticError):
    pass


class NonConvergenceError(NumericError):
    def __init__(self, message, residual=None, iterations=None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class UnsupportedOrderError(WeylabError, ValueError):
    pass


class DomainError(WeylabError, ValueError):
    pass


class PreconditionError(WeylabError, ValueError):
    pass


class ResourceLimitError(WeylabError, RuntimeError):
    pass


class UnknownSuiteError(WeylabError, KeyError):
    pass


class ConditioningWarning(UserWarning):
    pass
