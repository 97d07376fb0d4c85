"""Exception types shared across the package."""


class SpacingsError(Exception):
    """Base class for errors raised by spacings_lab."""


class DomainError(SpacingsError, ValueError):
    """An argument lies outside the domain of the operation."""


class UnsupportedError(SpacingsError, ValueError):
    """The operation is not defined for this combination of inputs."""


class NumericalError(SpacingsError, ArithmeticError):
    """A quantity required by the computation is zero, infinite or divergent."""
