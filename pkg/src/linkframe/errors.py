"""Exception hierarchy shared by all linkframe modules."""

from __future__ import annotations


class LinkframeError(Exception):
    """Base class for all library errors."""


class InvalidArgumentError(LinkframeError, ValueError):
    """An argument violates a documented precondition."""


class SingularityError(LinkframeError, ArithmeticError):
    """Two curves touch (or nearly so) and the Gauss integrand blows up."""

    def __init__(self, message: str, pair: tuple[int, int] | None = None, distance: float | None = None):
        super().__init__(message)
        self.pair = pair
        self.distance = distance


class ConvergenceError(LinkframeError, ArithmeticError):
    """A numerical method stopped before producing a confident integer.

    ``estimate`` carries the best available :class:`~linkframe.estimate.LinkEstimate`.
    """

    def __init__(self, message: str, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class DegeneracyError(LinkframeError):
    """A projection is not generic (vertex on edge, overlapping edges)."""

    def __init__(self, message: str, feature: tuple | None = None):
        super().__init__(message)
        self.feature = feature
