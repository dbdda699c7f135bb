"""Exception types shared across the package."""


class RelupropError(ValueError):
    """Base class for all errors raised by this package."""


class DomainError(RelupropError):
    """An argument is outside the mathematical domain of an operation."""


class DegenerateCorrelationError(DomainError):
    """|rho| = 1 where a non-degenerate bivariate density is required."""


class ShapeError(RelupropError):
    """Array dimensions are mutually inconsistent."""


class SchemaError(RelupropError):
    """A file does not conform to its documented schema.

    ``field`` names the offending entry so CLI errors can point at it.
    """

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class NullEventError(RelupropError):
    """Conditioning on an event of (numerically) zero probability."""


class NumericalConsistencyError(RelupropError):
    """An internal numerical invariant was violated beyond rounding noise."""


class ConfigError(RelupropError):
    """Invalid run configuration (sample counts, grids, ...)."""
