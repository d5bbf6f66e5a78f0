"""Exception types shared across the package."""


class GreeneError(Exception):
    """Base class for all library errors."""


class NotDivisible(GreeneError):
    pass


class PoleCollision(GreeneError):
    """A specialization sends a denominator factor to zero."""


class IrrationalPole(GreeneError):
    pass


class ImproperIntegrand(GreeneError):
    pass


class SubstitutionPole(GreeneError):
    pass


class CycleDetected(GreeneError):
    pass


class NotIncomparable(GreeneError):
    pass


class NotCoverEdge(GreeneError):
    pass


class NotConnected(GreeneError):
    pass


class SizeExceeded(GreeneError):
    pass


class PreconditionFailed(GreeneError):
    pass


class DuplicateNode(GreeneError):
    pass


class DuplicateElement(GreeneError):
    pass


class TruncationRequired(GreeneError):
    pass


class PoleAtX(GreeneError):
    pass


class EqualIndices(GreeneError):
    pass


class LabelingNotExtension(GreeneError):
    pass


class ParseError(GreeneError):
    def __init__(self, msg, line=None, col=None):
        self.line = line
        self.col = col
        where = ""
        if line is not None:
            where = f"line {line}" + (f", col {col}" if col is not None else "") + ": "
        super().__init__(where + msg)


class DivisionByZero(GreeneError, ZeroDivisionError):
    """A sample makes a required divisor vanish; callers usually resample."""
