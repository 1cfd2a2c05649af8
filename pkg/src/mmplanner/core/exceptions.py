"""Errors raised by the planning library."""


class PlannerError(Exception):
    """Root of every error mmplanner raises; the CLI maps subclasses to exit codes.

    Example:
        >>> from mmplanner import PlannerError, ConfigurationError
        >>> issubclass(ConfigurationError, PlannerError)
        True
    """


class ConfigurationError(PlannerError):
    """A profile, DWA or simulation setting is out of range.

    Messages name the setting and the rejected value.

    Example:
        >>> from mmplanner import RobotProfile
        >>> RobotProfile(speed=-1.0)
        Traceback (most recent call last):
        ...
        mmplanner.core.exceptions.ConfigurationError: speed must be positive, got -1.0
    """


class MapFormatError(PlannerError):
    """Raised when a map, scenario, plan or log document is malformed.

    Attributes:
        field: Name of the offending document field.

    Example:
        >>> from mmplanner import load_map
        >>> load_map(b'{"width": 2, "height": 1, "cell_size_m": 1, "heights": [0]}')
        Traceback (most recent call last):
        ...
        mmplanner.core.exceptions.MapFormatError: heights: expected 2 values, got 1
    """

    def __init__(self, field: str, message: str) -> None:
        super().__init__(f"{field}: {message}")
        self.field = field


class InputDomainError(PlannerError):
    """Raised for out-of-bounds or non-adjacent cells and invalid endpoints."""


class ContractViolation(PlannerError):
    """Raised when a caller breaks an operation precondition.

    Costing a Blocked step or a height change above the overcoming limit
    are contract violations: callers classify transitions first.
    """


class InternalConsistencyError(PlannerError):
    """Raised when search bookkeeping contradicts itself.

    A broken parent chain during path reconstruction, or a recomputed path
    total disagreeing with the search's g value.
    """
