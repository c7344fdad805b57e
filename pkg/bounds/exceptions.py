"""
Error hierarchy for Simple Bounds

Every error carries the exit code the management commands report for it.
"""


class BoundsError(Exception):
    """Base class for all bound computation errors"""

    exit_code = 3

    def __init__(self, message, detail=None):
        super().__init__(message)
        self.message = message
        self.detail = detail

    def __str__(self):
        if self.detail:
            return f"{self.message}: {self.detail}"
        return self.message


class DomainError(BoundsError, ValueError):
    """Parameters outside the stated domain of an operation"""


class InsufficientDataError(BoundsError):
    """The event system does not carry intersections deep enough"""


class BinomialOverflowError(DomainError, OverflowError):
    """An exact integer would leave the 128-bit accumulation range"""


class InputValidationError(BoundsError, ValueError):
    """Malformed or inconsistent input document"""

    exit_code = 2
