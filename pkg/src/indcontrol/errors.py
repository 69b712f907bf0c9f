"""Exception types raised by the package."""


class IndControlError(Exception):
    """Base class for all package errors."""


class ValidationError(IndControlError, ValueError):
    """Input data violates a structural or physical constraint.

    ``path`` locates the offending field when the data came from a file.
    """

    def __init__(self, message, path=None):
        self.path = path
        if path:
            message = f"{path}: {message}"
        super().__init__(message)


class DimensionMismatch(ValidationError):
    pass


class ClosureCapError(IndControlError):
    """Lie closure kept growing past the requested ``max_dim``."""

    def __init__(self, max_dim, depth):
        self.max_dim = max_dim
        self.depth = depth
        super().__init__(f"closure exceeded max_dim={max_dim} at depth {depth}")


class HypothesisError(IndControlError):
    """The control algebra on A does not generate su(n_A)."""


class DisintegrationFailure(IndControlError):
    """Tensor blocks extracted from L do not account for dim L."""


class InconsistencyError(IndControlError):
    """Computed results contradict the equivalence theorem beyond tolerance."""
