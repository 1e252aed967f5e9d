"""Exception types shared across the package."""


class TrisectError(Exception):
    pass


class FieldMismatch(TrisectError):
    pass


class DivisionByZero(TrisectError, ZeroDivisionError):
    pass


class WrongCharacteristic(TrisectError):
    pass


class WrongParity(TrisectError):
    pass


class InvalidParameter(TrisectError):
    pass


class InternalInvariantViolation(TrisectError):
    pass


class Mismatch(TrisectError):
    """Dimension or field mismatch between a form and its arguments."""


class ZeroVector(TrisectError):
    pass


class SingularMatrix(TrisectError):
    pass


class TooLarge(TrisectError):
    pass


class NotASpread(TrisectError):
    pass
