"""Core domain models shared by the planners, the simulator and the harness."""

import math
from dataclasses import dataclass, field
from enum import StrEnum
from typing import NamedTuple

from mmplanner.core.exceptions import ConfigurationError


class CellIndex(NamedTuple):
    """Grid cell identity: column ``x`` and row ``y`` (row 0 is the top row).

    Example:
        >>> cell = CellIndex(3, 4)
        >>> cell.x, cell.y
        (3, 4)
        >>> cell == (3, 4)
        True
    """

    x: int
    y: int


class MoveKind(StrEnum):
    """Step shape between adjacent cells."""

    CARDINAL = "cardinal"
    DIAGONAL = "diagonal"


class TraversalClass(StrEnum):
    """Surmountability of a step between adjacent cells for one robot.

    Example:
        >>> TraversalClass.OVERCOME.value
        'overcome'
    """

    DIRECT = "direct"
    OVERCOME = "overcome"
    BLOCKED = "blocked"


@dataclass(frozen=True)
class RobotProfile:
    """Robot speed, climbing costs, height thresholds and kinematic limits.

    Attributes:
        speed: Nominal travel speed in m/s used by the cost model.
        t_up: Seconds per meter of climb.
        t_down: Seconds per meter of descent.
        max_direct_height: Height changes below this are driven over (m).
        max_overcome_height: Height changes above this are insurmountable (m).
        footprint_radius: Radius of the disc footprint (m).
        v_max: Maximum linear velocity for the local planner (m/s).
        v_min: Minimum linear velocity for the local planner (m/s).
        omega_max: Maximum angular velocity (rad/s).
        accel_v: Linear acceleration bound (m/s^2).
        accel_omega: Angular acceleration bound (rad/s^2).
        overcome_enabled: When False every would-be Overcome step is Blocked,
            which turns the planner into a flat 2D planner.

    Example:
        >>> profile = RobotProfile()
        >>> profile.t_up, profile.t_down
        (4.0, 3.0)
        >>> RobotProfile(max_direct_height=0.6, max_overcome_height=0.5)
        Traceback (most recent call last):
        ...
        mmplanner.core.exceptions.ConfigurationError: max_direct_height ... 0.6 > 0.5
    """

    speed: float = 1.0
    t_up: float = 4.0
    t_down: float = 3.0
    max_direct_height: float = 0.05
    max_overcome_height: float = 0.5
    footprint_radius: float = 0.25
    v_max: float = 1.0
    v_min: float = 0.0
    omega_max: float = 1.5
    accel_v: float = 1.0
    accel_omega: float = 3.0
    overcome_enabled: bool = True

    def __post_init__(self) -> None:
        """Validate configuration values."""
        positive = ("speed", "footprint_radius", "v_max", "omega_max")
        for name in (*positive, "accel_v", "accel_omega"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0:
                raise ConfigurationError(f"{name} must be positive, got {value}")
        for name in ("t_up", "t_down", "max_direct_height"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise ConfigurationError(
                    f"{name} must be non-negative, got {value}"
                )
        if self.max_direct_height > self.max_overcome_height:
            raise ConfigurationError(
                "max_direct_height must not exceed max_overcome_height, "
                f"got {self.max_direct_height} > {self.max_overcome_height}"
            )
        if self.v_min > self.v_max:
            raise ConfigurationError(
                f"v_min must not exceed v_max, got {self.v_min} > {self.v_max}"
            )


@dataclass(frozen=True)
class EdgeCost:
    """Time cost of one step: travel plus obstacle overcoming.

    Example:
        >>> EdgeCost(travel_time=1.0, overcome_time=4.0).total
        5.0
    """

    travel_time: float
    overcome_time: float = 0.0

    @property
    def total(self) -> float:
        """Exact sum of travel and overcoming time."""
        return self.travel_time + self.overcome_time


LogValue = str | int | float | bool


@dataclass(frozen=True)
class LogEntry:
    """One structured log line: wall-clock ``timestamp`` in seconds, a level
    name (DEBUG, INFO, WARN, ERROR), the message and its fields.

    Example:
        >>> LogEntry(1702300000.0, "INFO", "plan finished", {"nodes": 42}).level
        'INFO'
    """

    timestamp: float
    level: str
    message: str
    attributes: dict[str, LogValue] = field(default_factory=dict)


@dataclass(frozen=True)
class MetricSample:
    """A named value observed at ``timestamp``, split by string ``labels``.

    Example:
        >>> s = MetricSample("plan_nodes_expanded", 0.0, 42.0, {"strategy": "abfs"})
        >>> s.labels["strategy"], s.value
        ('abfs', 42.0)
    """

    name: str
    timestamp: float
    value: float
    labels: dict[str, str] = field(default_factory=dict)
