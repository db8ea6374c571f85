"""Exception types shared across the package."""


class BudgetError(ValueError):
    """An enumeration would exceed the documented desk-scale budget."""


class HypothesisError(ValueError):
    """Inputs violate a stated hypothesis of the construction or check."""


class CheckFailure(AssertionError):
    """A mathematical assertion (bound or identity) failed on real data."""
