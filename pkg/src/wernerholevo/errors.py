"""Exception types raised by the library.

Input-validation failures derive from :class:`ValueError`; numerical
failures that indicate an algorithmic problem derive from
:class:`ArithmeticError`.
"""


class WernerHolevoError(Exception):
    """Base class for every error raised by this package."""


class InputError(WernerHolevoError, ValueError):
    pass


class NumericalError(WernerHolevoError, ArithmeticError):
    pass


class DimensionMismatch(InputError):
    pass


class NotHermitian(InputError):
    pass


class NotUnitary(InputError):
    pass


class NotNormalized(InputError):
    pass


class NegativeEigenvalue(InputError):
    pass


class InvalidSchmidt(InputError):
    pass


class LengthMismatch(InputError):
    pass


class DomainError(InputError):
    pass


class DegreeOutOfRange(InputError):
    pass


class ConstraintViolated(InputError):
    pass


class PoleProximity(InputError):
    pass


class PoleHit(InputError):
    pass


class NotComparable(InputError):
    pass


class DegenerateDimension(InputError):
    pass


class BudgetTooSmall(InputError):
    pass


class NoConvergence(NumericalError):
    pass


class NoBracket(NumericalError):
    pass


class IdentityViolation(NumericalError):
    """A closed-form identity failed to hold at its stated tolerance."""
