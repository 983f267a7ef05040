"""Shared exception types."""


class BudgetExceeded(RuntimeError):
    """Raised when a requested computation exceeds a hard size/compute budget.

    The CLI maps this to exit code 3; validation errors (ValueError) map to 2.
    """
