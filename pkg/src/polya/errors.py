"""Exception hierarchy shared by every module."""


class PolyaError(Exception):
    """Base class for all errors raised by the package."""


class InvalidInput(PolyaError, ValueError):
    """An argument violates an operation's precondition."""


class SearchExhausted(PolyaError):
    """A bounded search ran out of candidates before finding a result."""


class BudgetExceeded(PolyaError):
    """A continued-fraction walk exceeded its step budget."""


class InconsistencyError(PolyaError):
    """An internal identity that must always hold was violated (a bug)."""
