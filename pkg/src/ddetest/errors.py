"""Exception taxonomy with stable CLI exit codes.

Exit-code contract: 0 ok, 2 usage, 3 data, 4 fit, 5 numeric.  Every error
raised by the pipeline carries the stage it failed in (``stage`` attribute)
so callers can report where a multi-step run broke.
"""
from __future__ import annotations


class DdeError(Exception):
    """Base class for all package errors."""

    exit_code = 1

    def __init__(self, message: str, *, stage: str | None = None):
        super().__init__(message)
        self.stage = stage


class UsageError(DdeError):
    """Invalid flags, options, or parameter values supplied by the caller."""

    exit_code = 2


class InvalidParameterError(UsageError):
    """Distribution parameters violate the family's positivity constraints."""


class DataError(DdeError):
    """Input data could not be read, parsed, or used."""

    exit_code = 3


class SupportError(DataError):
    """A datum lies outside the support of the hypothesized family."""


class DegenerateDataError(DataError):
    """Data carry no usable variation (e.g., all values identical)."""


class FitError(DdeError):
    """Maximum-likelihood fitting failed to converge."""

    exit_code = 4


class NumericError(DdeError):
    """A numerical routine failed to reach its accuracy target."""

    exit_code = 5


class QuadratureError(NumericError):
    """Adaptive integration hit its subdivision cap; reports achieved error."""

    def __init__(self, message: str, *, value: float, error_estimate: float,
                 stage: str | None = None):
        super().__init__(message, stage=stage)
        self.value = value
        self.error_estimate = error_estimate
