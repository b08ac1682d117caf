"""Exception hierarchy shared by every module of the package."""


class AlphaPoissonError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(AlphaPoissonError, ValueError):
    """An argument lies outside the domain of the operation."""


class PoleError(DomainError):
    """Gamma evaluated at one of its poles 0, -1, -2, ..."""


class DivergenceError(AlphaPoissonError, ArithmeticError):
    """A series or integral that is requested to converge does not."""


class NonConvergence(AlphaPoissonError, ArithmeticError):
    """An iterative evaluation hit its term or iteration cap."""


class AccuracyError(AlphaPoissonError, ArithmeticError):
    """The node budget of a quadrature policy cannot deliver the requested point."""


class ConfigError(AlphaPoissonError, ValueError):
    """An experiment was configured with inconsistent parameters."""
