"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class RegimeError(RuntimeError):
    """Inputs are valid but outside the regime where the method applies
    (no real exponent, non-positive normalization sum, ...)."""


class ConvergenceError(RuntimeError):
    """An iterative or adaptive procedure failed to reach its tolerance."""


class UnsupportedError(ValueError):
    """The requested quantity is complex-valued or otherwise outside what
    this package computes (e.g. normalization for q < 0)."""
