"""Exception types shared across the package.

All inherit ValueError so callers can catch broadly, while the CLI can
map specific failures to distinct exit codes.
"""


class DimensionError(ValueError):
    """Operands have incompatible shapes or sizes."""


class ParameterError(ValueError):
    """A scalar argument is outside its valid range."""


class DegenerateProblemError(ValueError):
    """The problem carries no curvature (e.g. every component is zero)."""


class DistributionError(ValueError):
    """A probability vector is negative, non-finite, or not normalized."""


class ZeroRowError(ValueError):
    """A matrix row is identically zero where a nonzero row is required."""


class UnreachableComponentError(ValueError):
    """A weighting assigns zero sampling mass to a component that still matters."""


class BoundUndefinedError(ValueError):
    """A requested bound or step size is not defined for these constants."""
