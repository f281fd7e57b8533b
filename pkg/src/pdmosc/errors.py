"""Exception types raised across the package."""


class ParameterError(ValueError):
    """Invalid model parameter. ``field`` names the offending input."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


class DomainError(ValueError):
    """Argument outside the domain of a special function."""


class NumericalError(ArithmeticError):
    """A numerical procedure could not reach its accuracy contract.

    ``residual`` carries the achieved value when one is available.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class SingularityError(NumericalError):
    """A diagonal function of the delta operator hit a pole or branch point."""

    def __init__(self, message, entry=None):
        super().__init__(message)
        self.entry = entry
