"""Exception types shared across the package."""


class InvariantError(ValueError):
    """An input violates a structural invariant (bad index, bad layering, ...)."""


class BudgetExceeded(RuntimeError):
    """An enumeration or search ran past its configured budget."""


class NotMinUnique(ValueError):
    """A weighting was expected to be min-unique but is not."""


class SingularMatrix(ValueError):
    """A matrix that must be invertible has determinant zero."""
