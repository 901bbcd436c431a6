"""Exception types raised across the package."""


class EvdRangeError(Exception):
    """Base class for all errors raised by evdrange."""


class NotSymmetric(EvdRangeError, ValueError):
    pass


class ZeroMatrix(EvdRangeError, ValueError):
    pass


class InsufficientRows(EvdRangeError, ValueError):
    pass


class NotPSD(EvdRangeError, ValueError):
    pass


class ParseError(EvdRangeError, ValueError):
    pass


class DivideByZero(EvdRangeError, ZeroDivisionError):
    pass


class NegativeSqrt(EvdRangeError, ValueError):
    pass


class FixedOverflow(EvdRangeError, OverflowError):
    """Raised in strict mode on the first fixed-point overflow event."""

    def __init__(self, event):
        super().__init__(f"fixed-point overflow: {event}")
        self.event = event


class UnboundedRange(EvdRangeError, ValueError):
    pass


class LengthMismatch(EvdRangeError, ValueError):
    pass


class ShapeMismatch(EvdRangeError, ValueError):
    pass


class DimensionMismatch(EvdRangeError, ValueError):
    pass


class AllZero(EvdRangeError, ValueError):
    pass


class NoScaleFactor(EvdRangeError, ValueError):
    pass
