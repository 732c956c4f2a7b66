"""Errors shared across the package."""
from __future__ import annotations


class ResourceBudgetError(RuntimeError):
    """An operation would exceed its memory or enumeration budget.

    The offending requirement is reported so callers can either raise the
    budget or shrink the problem.
    """

    def __init__(self, message: str, *, required: int | None = None,
                 budget: int | None = None) -> None:
        if required is not None and budget is not None:
            message = f"{message} (required {required}, budget {budget})"
        super().__init__(message)
        self.required = required
        self.budget = budget


class NoRepresentationError(RuntimeError):
    """A decomposition request has no representation within its term cap."""
