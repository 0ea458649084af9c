"""Exception hierarchy shared by all modules."""


class SpinConnError(Exception):
    """Base class for every error raised by :mod:`spinconn`."""


class DomainError(SpinConnError, ValueError):
    """A point (or a finite-difference stencil point) left the chart domain."""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class UnknownSpacetime(SpinConnError, KeyError):
    pass


class InvalidParam(SpinConnError, ValueError):
    pass


class SingularMetric(SpinConnError, ArithmeticError):
    pass


class DegenerateFrame(SpinConnError, ArithmeticError):
    pass


class NotInvolutive(SpinConnError, ValueError):
    pass


class InconsistentAlgebra(SpinConnError, ValueError):
    pass


class SingularGauge(SpinConnError, ArithmeticError):
    pass


class ConfigError(SpinConnError, ValueError):
    pass
