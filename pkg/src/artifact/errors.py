"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or inconsistent input (bad dimensions, non-involution, ...)."""


class TruncationError(ArithmeticError):
    """A series operation would need terms beyond its declared order."""


class DegenerateError(ArithmeticError):
    """Configuration too close to a singular locus."""


class NonConvergenceError(RuntimeError):
    """A Monte-Carlo estimate failed to meet its error target."""


class BudgetError(RuntimeError):
    """A combinatorial enumeration would exceed its configured size guard."""
