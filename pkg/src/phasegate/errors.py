"""Exception types shared across the package.

The CLI maps these onto exit codes: validation problems exit with 3,
numerical problems (bandwidth, step size) with 4.
"""


class ValidationError(ValueError):
    """A parameter, config entry, or scenario violates a precondition."""


class ScheduleGapError(ValidationError):
    """A time was requested outside the coverage of a Stark schedule."""


class InconsistentInputsError(ValidationError):
    """Scenario results with mismatched parameters were combined."""


class NumericalError(RuntimeError):
    """Base class for runtime numerical failures."""


class BandwidthExceededError(NumericalError):
    """An envelope carries non-negligible energy outside the mode grid."""


class StepTooLargeError(NumericalError):
    """The integration step violates the stability precondition."""


class UndefinedPhaseError(NumericalError):
    """A phase was requested where the reference amplitude vanishes."""


class DegenerateStateError(NumericalError):
    """A state with zero norm cannot be normalized."""
