"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: invalid input -> 2, a checked identity
that failed -> 1, insufficient precision -> 3.
"""


class WildramError(Exception):
    """Base class for all library errors."""


class InvalidInput(WildramError, ValueError):
    """Arguments violate an operation's preconditions."""


class RingError(InvalidInput):
    """Bad ring presentation or an impossible ring operation."""


class SeriesError(InvalidInput):
    """Series operation outside its domain (non-unit divisor, unit constant term, ...)."""


class PrecisionError(WildramError):
    """The requested quantity is not determined at the available precision."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class VerificationError(WildramError):
    """An identity that must hold exactly was found to fail."""
