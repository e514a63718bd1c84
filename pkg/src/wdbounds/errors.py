"""Exception hierarchy shared by all wdbounds modules."""


class WDBoundsError(ValueError):
    """Base class for every error raised by this package."""


class PrecisionCapExceeded(WDBoundsError):
    """A value could not be resolved within the configured precision cap."""


class DomainViolation(WDBoundsError):
    pass


class InsufficientCoefficients(WDBoundsError):
    pass


class OrderTooSmall(WDBoundsError):
    pass
