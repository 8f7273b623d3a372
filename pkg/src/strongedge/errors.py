"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed graph input, unknown generator kind, infeasible sizes."""


class UsageError(ValueError):
    """An operation was called on a value that violates its precondition."""


class PreconditionError(ValueError):
    """Parameters or graphs outside the theorem's hypotheses."""


class ResourceLimitError(RuntimeError):
    """The exact search exceeded its edge or time limit.

    ``lower`` and ``upper`` carry the best bounds found before giving up.
    """

    def __init__(self, message, lower=None, upper=None):
        super().__init__(message)
        self.lower = lower
        self.upper = upper


class ReplayError(Exception):
    """A trace failed an audit check at ``step`` for ``clause``."""

    def __init__(self, step, clause, detail=""):
        super().__init__(f"step {step}: {clause}" + (f" ({detail})" if detail else ""))
        self.step = step
        self.clause = clause
        self.detail = detail
