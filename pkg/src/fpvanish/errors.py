"""Exception types shared across the package."""

from __future__ import annotations


class CapExceededError(RuntimeError):
    """A requested computation exceeds a configured size cap."""


class PreconditionError(ValueError):
    """An operation's precondition was violated by the supplied arguments."""


class NotInSpanError(PreconditionError):
    """A target vector lies outside the span of the given multiset."""


class SearchBudgetExceededError(RuntimeError):
    """A randomized search failed to produce a verified result in budget."""


class InvariantViolationError(RuntimeError):
    """An internal invariant re-check failed; indicates a bug, not bad input."""
