"""Exception hierarchy shared by all modules.

Each class maps onto one CLI exit code (see :mod:`ginibre_interp.cli`).
"""


class GinibreError(Exception):
    """Base class for errors raised by this package."""

    exit_code = 1


class DomainError(GinibreError, ValueError):
    """An argument lies outside the domain of the operation."""

    exit_code = 2


class PrecisionError(GinibreError):
    """Floating point precision is insufficient for the requested size."""

    exit_code = 3


class AccuracyError(GinibreError):
    """A numerical procedure failed to reach its tolerance.

    Carries the best available estimate and an error bound so that callers
    can decide whether the value is still usable.
    """

    exit_code = 3

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class NumericError(GinibreError):
    """An iterative kernel (e.g. the eigensolver) did not converge."""

    exit_code = 4
