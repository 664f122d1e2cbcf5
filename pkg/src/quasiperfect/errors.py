"""Exception types shared across the package."""


class QpcError(Exception):
    """Base class for errors raised by this package."""


class BudgetExceeded(QpcError):
    """A computation would exceed its configured size budget; nothing was computed."""


class FormatError(QpcError, ValueError):
    """Malformed or inconsistent QPC input."""


class ConsistencyError(QpcError):
    """An internal cross-check against a known formula failed."""
