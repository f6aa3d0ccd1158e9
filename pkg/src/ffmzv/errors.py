"""Exception hierarchy shared by every ffmzv module."""


class FFMZVError(Exception):
    """Base class for all library errors."""


class NotPrime(FFMZVError, ValueError):
    pass


class NotIrreducible(FFMZVError, ValueError):
    pass


class DegreeMismatch(FFMZVError, ValueError):
    pass


class FieldTooLarge(FFMZVError, ValueError):
    pass


class DivisionByZero(FFMZVError, ZeroDivisionError):
    pass


class FieldMismatch(FFMZVError, TypeError):
    pass


class BadBase(FFMZVError, ValueError):
    pass


class LengthMismatch(FFMZVError, ValueError):
    pass


class SequenceTooShort(FFMZVError, ValueError):
    pass


class SingularCurve(FFMZVError, ValueError):
    pass


class UnsupportedModel(FFMZVError, ValueError):
    pass


class PrecisionTooSmall(FFMZVError, ValueError):
    pass


class EmptyWindow(FFMZVError, ArithmeticError):
    pass


class NotInvertible(FFMZVError, ArithmeticError):
    pass


class CutoffTooSmall(FFMZVError, ValueError):
    pass


class ParseError(FFMZVError, ValueError):
    pass


class ResourceError(FFMZVError):
    """A computation ran out of its configured budget (CLI exit code 3)."""


class BudgetExceeded(ResourceError):
    pass


class PrecisionEscalationFailed(ResourceError):
    pass
