"""Exception types shared across the package."""

import os


class SepcovError(Exception):
    """Base class for all errors raised by this package."""


class NfaFormatError(SepcovError, ValueError):
    """A serialized automaton or word could not be read.

    ``location`` names the offending part of the document, e.g.
    ``"transitions[3]"`` or ``"line 4, column 7"``.
    """

    def __init__(self, message, location=None):
        self.location = location
        if location is not None:
            message = f"{location}: {message}"
        super().__init__(message)


class AlphabetError(SepcovError, ValueError):
    """A word or automaton uses a letter outside the expected alphabet."""


class CapacityError(SepcovError):
    """An exact construction would exceed its configured budget."""


DEFAULT_BUDGET = 2_000_000


def resolve_budget(budget=None, default=DEFAULT_BUDGET):
    """Explicit argument, then ``SEPCOV_BUDGET``, then ``default``."""
    if budget is not None:
        return int(budget)
    env = os.environ.get("SEPCOV_BUDGET")
    if env:
        return int(env)
    return default
