"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain an operation is defined on."""


class NumericalError(ArithmeticError):
    """A floating-point result fell outside its tolerated range."""


class CalibrationError(DomainError):
    """A PBS calibration is malformed or physically inconsistent."""


class ConvergenceError(RuntimeError):
    """The alignment optimizer did not reach a stationary point.

    ``diagnostics`` holds the best point found so callers can still
    report it.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class UndefinedEstimateError(ZeroDivisionError):
    """A ratio estimate was requested from an empty counts record."""
