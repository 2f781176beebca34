"""Exception types shared across the package."""


class PmfError(ValueError):
    """A probability mass function is malformed (bad mass sum, negative mass)."""


class DomainError(ValueError):
    """An operation was evaluated outside its mathematical domain."""


class ConvergenceError(RuntimeError):
    """An iterative numerical procedure failed to meet its tolerance."""


class InsufficientDataError(RuntimeError):
    """A Monte Carlo estimator did not collect enough samples."""
