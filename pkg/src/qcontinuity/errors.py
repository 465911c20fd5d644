"""Exception types raised by the toolkit.

Every error derives from :class:`ContinuityError` (itself a ``ValueError``) so
callers can catch the whole family in one place.
"""


class ContinuityError(ValueError):
    pass


class NonHermitian(ContinuityError):
    pass


class InvalidState(ContinuityError):
    pass


class DimMismatch(ContinuityError):
    pass


class InvalidRank(ContinuityError):
    pass


class OutOfRange(ContinuityError):
    pass


class NegativeInput(OutOfRange):
    pass


class EnergyBelowGround(ContinuityError):
    pass


class BracketFailure(ContinuityError):
    pass


class EqualMeasures(ContinuityError):
    pass


class LabelMismatch(ContinuityError):
    pass


class BasisMismatch(ContinuityError):
    pass


class DominationFailure(ContinuityError):
    pass


class ConstraintViolated(ContinuityError):
    pass


class ArityMismatch(ContinuityError):
    pass


class IndexOutOfRange(ContinuityError, IndexError):
    pass


class CutoffTooSmall(ContinuityError):
    pass


class DimensionTooLarge(ContinuityError):
    pass


class InfeasibleConstraint(ContinuityError):
    pass


class ConfigError(ContinuityError):
    pass
