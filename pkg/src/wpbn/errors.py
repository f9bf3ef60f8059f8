"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Invalid parameters or an inconsistent scenario/spec."""


class NumericalError(RuntimeError):
    """A numerical routine failed to meet its tolerance.

    ``best_estimate`` carries whatever the routine had when it gave up.
    """

    def __init__(self, message, best_estimate=None):
        super().__init__(message)
        self.best_estimate = best_estimate


class RealizationInfeasible(RuntimeError):
    """A sampled network cannot be evaluated (e.g. PBs missing near a BN)."""
