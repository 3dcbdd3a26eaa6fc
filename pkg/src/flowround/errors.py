"""Exception hierarchy shared by every module."""

from __future__ import annotations


class FlowRoundingError(Exception):
    """Base class for all errors raised by this package."""


class NotCirculationError(FlowRoundingError):
    pass


class MissingCostsError(FlowRoundingError):
    pass


class NotAFlowError(FlowRoundingError):
    pass


class GraphMismatchError(FlowRoundingError):
    pass


class DegenerateCycleError(FlowRoundingError):
    pass


class BranchBudgetExceeded(FlowRoundingError):
    pass


class InvalidParameterError(FlowRoundingError, ValueError):
    pass


class InvariantError(FlowRoundingError):
    """An internal guarantee was broken; always a bug, never bad input."""


# dynamic tree errors


class DynTreeError(FlowRoundingError):
    pass


class SameTreeError(DynTreeError):
    pass


class NotConnectedError(DynTreeError):
    pass


class NoSuchEdgeError(DynTreeError):
    pass


class SameNodeError(DynTreeError):
    pass


class NegativeAvailabilityError(InvariantError, DynTreeError):
    pass


class ParseError(FlowRoundingError, ValueError):
    """Malformed instance or result text; carries the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")
