"""Exception types raised by the library."""


class KoppelmanError(Exception):
    """Base class for all library errors."""


class SingularityError(KoppelmanError, ValueError):
    """A kernel or form was evaluated on its declared singular set."""


class DimensionError(KoppelmanError, ValueError):
    pass


class AccuracyError(KoppelmanError):
    """Quadrature budget exhausted before reaching the requested tolerance.

    The best available estimate is kept on ``partial``.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class DivergenceError(KoppelmanError):
    """A cutoff family failed to converge (non-Cauchy tail)."""


class InvariantViolation(KoppelmanError):
    """Two independent routes that must agree exactly disagreed."""


class ConfigError(KoppelmanError, ValueError):
    """Bad scenario configuration; ``field`` names the offending key."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field
