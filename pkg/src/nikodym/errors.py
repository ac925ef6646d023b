"""Shared error types for resource refusals and exhausted searches."""


class CapExceededError(RuntimeError):
    """A computation would exceed a configured desk-scale cap."""


class SearchBudgetError(RuntimeError):
    """A randomized or enumerative search ran out of its retry budget."""
