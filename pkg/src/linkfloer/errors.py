"""Exception types raised across the package."""


class LinkFloerError(Exception):
    """Base class for all package errors."""


class UnknownBasepoint(LinkFloerError):
    pass


class NotFound(LinkFloerError):
    pass


class InvalidArc(LinkFloerError):
    pass


class AlternationViolation(LinkFloerError):
    pass


class ColoringViolation(LinkFloerError):
    pass


class ColorMismatch(LinkFloerError):
    pass


class ColorPrecondition(LinkFloerError):
    pass


class TooFewPairs(LinkFloerError):
    pass


class NotScalar(LinkFloerError):
    pass


class ShapeMismatch(LinkFloerError):
    pass


class GradingViolation(LinkFloerError):
    pass


class FiltrationViolation(LinkFloerError):
    pass


class DifferentialNotSquareZero(LinkFloerError):
    pass


class NotABasepoint(LinkFloerError):
    pass


class NotOnePairKnot(LinkFloerError):
    pass


class NotAPermutation(LinkFloerError):
    pass


class MarkerCollision(LinkFloerError):
    pass


class SizeCapExceeded(LinkFloerError):
    pass


class UnregisteredPair(LinkFloerError):
    pass


class NotAChainMap(LinkFloerError):
    pass


class DegreeBoundTooLow(UserWarning):
    """Warning: the requested truncation is below the completeness bound."""
