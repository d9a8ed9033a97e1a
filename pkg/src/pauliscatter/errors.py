"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class NumericalError(ArithmeticError):
    """A root-finder, quadrature or ODE step failed to converge.

    ``diagnostics`` carries whatever partial state helps explain the failure
    (bracket, last iterate, trajectory so far, ...).
    """

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


class FitError(ValueError):
    """The data cannot support the requested least-squares fit."""


class ConfigError(ValueError):
    """Malformed or inconsistent run configuration."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
