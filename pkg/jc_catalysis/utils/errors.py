"""
Error hierarchy for the simulator.

Every error carries the process exit code the command line reports for it.
"""


class CatalysisError(Exception):
    """Base class; `detail` is the human-readable diagnostic."""

    exit_code: int = 1

    def __init__(self, detail: str = ""):
        super().__init__(detail)
        self.detail = detail


class ConfigInvalid(CatalysisError):
    exit_code = 2


class ComputeError(CatalysisError):
    exit_code = 3


class IoError(CatalysisError):
    exit_code = 4


class InvalidState(ComputeError):
    """A density matrix violates Hermiticity, unit trace or positivity."""


class TruncationTooSmall(ComputeError):
    pass


class IndexOutOfRange(ComputeError):
    pass


class DimensionMismatch(ComputeError):
    pass


class NonPSDInput(ComputeError):
    pass


class DegenerateTime(ComputeError):
    """The closed-form catalyst divides by a vanishing denominator at this time."""


class NoPSDFixedPoint(ComputeError):
    pass


class NotCatalytic(ComputeError):
    pass


class VacuumUndefined(ComputeError):
    pass


class GridTooSmall(ComputeError):
    pass


class PropagationUnstable(ComputeError):
    pass


class NoFeasibleTau(ComputeError):
    pass


class DimensionBudgetExceeded(ComputeError):
    pass


class InvalidParameter(ComputeError, ValueError):
    """A numeric argument lies outside its domain (negative time, order below 2, ...)."""
