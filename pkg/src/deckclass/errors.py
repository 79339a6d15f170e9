"""Exception hierarchy shared by all deckclass modules."""


class DeckClassError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(DeckClassError):
    """Malformed textual input (edge list, graph6, JSON)."""


class OutOfScopeError(DeckClassError):
    """Input violates a hypothesis of the decision procedure or an argument range."""


class VerificationError(DeckClassError):
    """An internal exact check failed; indicates a bug, not bad input."""


class BudgetError(DeckClassError):
    """A requested expansion (kernel materialization) exceeds the configured budget."""
