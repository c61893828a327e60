"""Exception hierarchy shared by every module."""

from typing import Optional, Sequence


class NetKrigingError(Exception):
    """Base exception for the toolkit.

    Attributes:
        operation: Name of the operation that failed, used in CLI diagnostics
    """

    def __init__(self, message: str, operation: Optional[str] = None):
        super().__init__(message)
        self.operation = operation

    def __str__(self) -> str:
        message = super().__str__()
        if self.operation:
            return f"{self.operation}: {message}"
        return message


class ConfigurationError(NetKrigingError):
    """Invalid or unreadable experiment configuration."""


class InvalidInputError(NetKrigingError, ValueError):
    """Caller supplied inputs that violate an operation's preconditions."""


class TopologyError(InvalidInputError):
    """Malformed network graph."""


class RoutingError(TopologyError):
    """A destination cannot be reached from a source."""

    def __init__(self, source: str, destination: str, operation: Optional[str] = None):
        super().__init__(f"no directed path from {source!r} to {destination!r}", operation)
        self.source = source
        self.destination = destination


class ScenarioError(InvalidInputError):
    """Observation scenario is unknown or inconsistent with the routing matrix."""


class DimensionMismatchError(InvalidInputError):
    """Array shapes do not line up."""


class InsufficientHistoryError(InvalidInputError):
    """Not enough past bins for the requested window."""


class InvalidParameterError(InvalidInputError):
    """A scalar parameter is out of its admissible range."""


class NumericalError(NetKrigingError):
    """A numerical procedure failed."""


class SingularMatrixError(NumericalError):
    """A matrix that must be inverted is singular and no fallback was allowed."""


class RankDeficientError(NumericalError):
    """A design matrix lacks full column rank."""


class NonPositiveMeanError(NumericalError):
    """The modelled flow means F·beta have nonpositive entries where positivity is required."""

    def __init__(self, flow_indices: Sequence[int], operation: Optional[str] = None):
        indices = tuple(int(i) for i in flow_indices)
        super().__init__(f"nonpositive modelled mean for flows {list(indices)}", operation)
        self.flow_indices = indices


class CirculantEmbeddingError(NumericalError):
    """The circulant embedding of an autocovariance has a negative eigenvalue."""


class RetryableNumericalError(NumericalError):
    """Numerical failure that may succeed with a larger work budget."""


class QuadratureError(RetryableNumericalError):
    """Adaptive quadrature did not reach the requested tolerance."""

    def __init__(self, message: str, abserr: float, operation: Optional[str] = None):
        super().__init__(f"{message} (achieved error estimate {abserr:.3e})", operation)
        self.abserr = abserr


class StageError(NetKrigingError):
    """Unexpected failure inside a pipeline stage."""
