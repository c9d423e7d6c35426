"""Exception hierarchy shared by every module of the package."""


class BetaFrechetError(Exception):
    """Base class for all errors raised by :mod:`betafrechet`."""


class DomainError(BetaFrechetError, ValueError):
    """An argument lies outside the domain of the function."""


class DataError(DomainError):
    """Observed data are unusable (non-positive, non-finite, too few)."""


class ConvergenceError(BetaFrechetError, ArithmeticError):
    """An iterative procedure did not settle.

    Parameters
    ----------
    message : str
        Human readable description.
    partial : object, optional
        Best value available when the iteration stopped (a partial sum,
        a best-found parameter point, ...).
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class DivergenceError(BetaFrechetError, ArithmeticError):
    """An integral or series diverges for the requested arguments."""


class MomentExistenceError(DivergenceError):
    """The requested moment is infinite or has no series representation."""


class HazardOverflowError(BetaFrechetError, OverflowError):
    """The survival function underflowed, so the hazard cannot be formed."""


class SingularMatrixError(BetaFrechetError, ArithmeticError):
    """An information matrix could not be inverted."""


class UnknownDatasetError(BetaFrechetError, LookupError):
    """No built-in dataset has the requested name."""
