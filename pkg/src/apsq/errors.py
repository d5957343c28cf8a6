"""Exception hierarchy shared by every module."""


class ApsqError(Exception):
    """Base class for library errors."""


class InvalidArgument(ApsqError, ValueError):
    pass


class UnsupportedCharacteristic(InvalidArgument):
    pass


class ResourceLimit(ApsqError):
    pass


class InvalidCurve(ApsqError, ValueError):
    pass


class DegenerateConfiguration(ApsqError):
    pass


class NotReducible(ApsqError, ValueError):
    pass


class InvariantViolation(ApsqError, AssertionError):
    """An identity that must hold mathematically was observed to fail."""
