"""Exception hierarchy shared across the package."""


class FrechetSetsError(ValueError):
    """Base class for domain errors raised by this package."""


class InvalidMetricError(FrechetSetsError):
    pass


class InvalidMeasureError(FrechetSetsError):
    pass


class EmptyDomainError(FrechetSetsError):
    """Raised when a Fréchet mean is requested over an empty candidate set."""


class EmptySetError(FrechetSetsError):
    """Raised when a Hausdorff excess is requested with an empty argument."""


class InvalidKernelError(FrechetSetsError):
    """Raised for non-stochastic, reducible or periodic transition kernels."""
