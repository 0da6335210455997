"""Exception types shared across the package."""


class CRTwistorError(Exception):
    """Base class for mathematical failures reported by the toolkit."""


class PoleError(CRTwistorError, ZeroDivisionError):
    def __init__(self, msg="evaluation at pole"):
        super().__init__(msg)


class NotAUnitError(CRTwistorError, ZeroDivisionError):
    def __init__(self, msg="series not a unit"):
        super().__init__(msg)


class DegenerateMetricError(CRTwistorError):
    def __init__(self, msg="degenerate metric"):
        super().__init__(msg)


class DomainError(CRTwistorError, ValueError):
    """Input outside the domain where an operation is defined."""


class ConfigError(CRTwistorError, ValueError):
    """Malformed or invalid configuration / boundary data."""
