"""Exceptions raised when a computation is refused on numerical grounds."""

__all__ = ["NumericalRefusal", "AliasingError", "QuadratureError", "NotInvertibleError", "ConvergenceWarning"]


class NumericalRefusal(Exception):
    """Base class for refusals that carry a machine-readable report."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class AliasingError(NumericalRefusal):
    def __init__(self, message, margin=None):
        super().__init__(message, {"aliasing_margin": margin})
        self.margin = margin


class QuadratureError(NumericalRefusal):
    def __init__(self, message, error_estimate=None):
        super().__init__(message, {"error_estimate": error_estimate})
        self.error_estimate = error_estimate


class NotInvertibleError(NumericalRefusal):
    """The sufficient invertibility criterion fails (inconclusive, not a proof of singularity)."""


class ConvergenceWarning(UserWarning):
    """An iterative method stopped before reaching its tolerance."""
