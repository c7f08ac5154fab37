"""Exception types shared across the package."""


class CotsumError(Exception):
    """Base class for all package errors."""


class DomainError(CotsumError, ValueError):
    """An argument lies outside the domain of the requested operation."""


class ResourceError(CotsumError, RuntimeError):
    """A requested computation exceeds its memory or enumeration budget."""


class PrecisionExhausted(CotsumError, ArithmeticError):
    """The working precision cannot resolve the requested continued-fraction depth."""

    def __init__(self, message, achieved_depth):
        super().__init__(message)
        self.achieved_depth = achieved_depth


class BudgetExhausted(CotsumError, RuntimeError):
    """A search ran out of evaluations; ``best`` holds the closest candidate."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best
