class NetstabError(Exception):
    """Base class for errors raised by netstab."""


class PatternError(NetstabError, ValueError):
    """A system, candidate or set-system document failed validation."""


class AssumptionError(NetstabError, ValueError):
    """The state pattern violates the Hall condition required by a reduction.

    ``witness`` holds a 1-based state subset S with |N(S)| < |S|.
    """

    def __init__(self, message, witness=()):
        super().__init__(message)
        self.witness = frozenset(witness)


class SearchLimitError(NetstabError):
    """An exact combinatorial search was requested above its size limit."""
