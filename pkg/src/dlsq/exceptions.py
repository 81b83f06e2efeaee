"""Exception hierarchy shared across the package."""


class DlsqError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(DlsqError, ValueError):
    """Operands have non-conformable shapes."""


class RankDeficiencyError(DlsqError, ValueError):
    """A matrix that must have full column rank does not.

    Attributes
    ----------
    column : int
        Index of the first column whose pivot fell below tolerance.
    """

    def __init__(self, column, pivot, threshold):
        self.column = column
        self.pivot = pivot
        self.threshold = threshold
        super().__init__(
            f"matrix is rank deficient at column {column}: "
            f"|R[{column},{column}]| = {pivot:.3e} < {threshold:.3e}"
        )


class TopologyError(DlsqError):
    """A network could not be generated or parsed."""


class AdjacencyError(DlsqError, ValueError):
    """A single-hop transmission was requested between non-neighbors."""


class PartitionError(DlsqError, ValueError):
    """A problem cannot be split over the requested number of nodes."""


class ConfigurationError(DlsqError, ValueError):
    """Solver or experiment configuration is invalid for the given inputs."""


class BreakdownError(DlsqError, ArithmeticError):
    """Conjugate-gradient breakdown (zero curvature along a search direction)."""

    def __init__(self, iteration):
        self.iteration = iteration
        super().__init__(f"CG breakdown: delta == 0 at iteration {iteration}")


class DivergenceError(DlsqError, ArithmeticError):
    """An iterative estimator blew up."""
