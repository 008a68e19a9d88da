class VPError(Exception):
    """Base class for all package errors."""


class DimensionError(VPError, ValueError):
    """Vector or matrix dimensions do not match."""


class ConeError(VPError, ValueError):
    """Invalid cone data or a cone precondition failed."""


class HypothesisError(VPError, ValueError):
    """An instance violates a hypothesis of the principle being run.

    ``invariant`` is a short stable tag naming the violated condition.
    """

    def __init__(self, message, invariant="hypothesis"):
        super().__init__(message)
        self.invariant = invariant


class InstanceError(VPError, ValueError):
    """An instance file could not be parsed."""


class IncompleteTraceError(VPError, RuntimeError):
    """Verification was requested on a trace that did not stabilize."""
