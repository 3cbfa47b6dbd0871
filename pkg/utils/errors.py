"""
Error Types
File: utils/errors.py

Exceptions raised across the project. Every input problem is a ValueError so
callers that only know the standard library can still catch it; exact checks
that fail raise InvariantViolation, which the command line reports with exit code 1.
"""


class UqfError(Exception):
    """Root of every error raised by this project."""


# ---------------------------------------------------------------------------
# Bad input (command line exit code 2)
# ---------------------------------------------------------------------------


class InputError(UqfError, ValueError):
    """An argument is outside the domain of the operation."""


class NotSquarefree(InputError):
    pass


class DTooSmall(InputError):
    pass


class NotFundamental(InputError):
    pass


class ContextMismatch(InputError):
    """Two elements belong to different quadratic fields."""


class IndexOutOfRange(InputError):
    pass


class BadIndexParity(InputError):
    pass


class ROutOfRange(InputError):
    pass


class NotTotallyPositive(InputError):
    pass


class NotTotallyPositiveTarget(InputError):
    pass


class ZeroInput(InputError):
    pass


class NotPrime(InputError):
    pass


class XOutOfRange(InputError):
    pass


class BadParameter(InputError):
    pass


class MissingIdealData(InputError):
    pass


# ---------------------------------------------------------------------------
# Numeric preconditions (command line exit code 4)
# ---------------------------------------------------------------------------


class NumericPrecondition(UqfError, ValueError):
    """A numeric parameter is too small for the certified error bounds to mean anything."""


class CutoffTooSmall(NumericPrecondition):
    pass


# ---------------------------------------------------------------------------
# Failed exact checks (command line exit code 1)
# ---------------------------------------------------------------------------


class InvariantViolation(UqfError, RuntimeError):
    """An identity or inequality that must hold exactly was found to fail."""
