"""Exception types shared by the package."""


class InputError(ValueError):
    """Malformed or unsupported user input."""


class BudgetExhausted(RuntimeError):
    """A search exceeded one of its configured limits.

    Raised instead of returning a possibly wrong answer.
    """


class ConventionError(AssertionError):
    """An internal consistency check failed (a bug, never a user error)."""


class UnsupportedRank(InputError):
    """The requested rank is above the configured bound."""
