"""Shared exception types for array-contract violations."""


class LengthMismatchError(ValueError):
    """Paired arrays passed to a pointwise reduction differ in length."""


class AllPointsMaskedError(ValueError):
    """Every grid point fell below the divisor mask; the metric is undefined."""


class EmptyHistoryError(ValueError):
    """A per-iteration reduction was asked for on an empty history."""
