"""Shared exception types."""

from __future__ import annotations


class DimensionMismatchError(ValueError):
    """Operands live in different ambient spaces or contexts."""


class NotInChartError(ValueError):
    """A plane has a singular minor on the requested chart."""


class StructureError(ValueError):
    """An algebraic structure invariant failed (independence, closure, ...)."""


class UnsupportedCharacteristicError(ValueError):
    """The construction is undefined or degenerate at this characteristic."""


class BudgetExceededError(RuntimeError):
    """A search or enumeration hit its work budget.

    ``count`` is the exact number of candidates the full run would touch when
    that is known up front, else the number processed before stopping.
    ``partial`` carries whatever was collected, for callers that can use an
    incomplete result.
    """

    def __init__(self, message: str, count: int = 0, partial=None):
        super().__init__(message)
        self.count = count
        self.partial = partial
