"""Exception types shared across the package."""


class SftConjError(Exception):
    """Base class for all package-specific errors."""


class BudgetExceededError(SftConjError):
    """A desk-scale search or enumeration ran past its configured budget.

    Callers can distinguish "no answer found" from "gave up": operations
    that exhaust their search space return an absent result, while this
    error means the question is still open.
    """


class InvalidBlockMapError(SftConjError, ValueError):
    """A block map table is not usable on the given graph (missing keys,
    keys that are not paths, or images that are not edges)."""


class ContractViolationError(SftConjError, ValueError):
    """An operation was called outside its documented precondition."""


class UndefinedEntropyError(SftConjError, ValueError):
    """Entropy was requested for a graph whose essential part is empty."""
