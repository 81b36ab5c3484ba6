"""Exception hierarchy shared by every module."""


class CausalRankError(Exception):
    """Base class for all package errors."""


class InputError(CausalRankError, ValueError):
    """Invalid argument values or malformed data."""


class DimensionError(InputError):
    """Arrays whose shapes do not fit together."""


class ConvergenceError(CausalRankError, RuntimeError):
    """An iterative solver ran out of sweeps."""

    def __init__(self, message, iterations):
        super().__init__(message)
        self.iterations = iterations


class DegenerateLeverageError(CausalRankError, ArithmeticError):
    """A leverage value is numerically 1, so the leave-one-out shortcut breaks."""


class SingularityError(CausalRankError, ArithmeticError):
    """A Gram matrix is rank deficient where full rank is required."""


class InsufficientSamplesError(InputError):
    """Fewer observations than the estimator needs."""


class DegenerateModelError(CausalRankError, ArithmeticError):
    """A structural model cannot be rescaled (zero implied variance)."""


class StationarityError(InputError):
    """VAR companion matrix has spectral radius >= 1."""


class InstabilityError(CausalRankError, ArithmeticError):
    """Simulated trajectory diverged."""


class UndefinedAUCError(CausalRankError, ValueError):
    """Ground truth has no positives or no negatives among evaluated entries."""
