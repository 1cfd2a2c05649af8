"""Scenario, tracking configuration and execution log models."""

import math
from dataclasses import dataclass, field
from enum import StrEnum
from itertools import pairwise

from mmplanner.core.costmodel import Metric
from mmplanner.core.dwa import DiscObstacle, DwaParams
from mmplanner.core.exceptions import ConfigurationError
from mmplanner.core.models import CellIndex, RobotProfile
from mmplanner.core.planner.results import PlannerConfig, Strategy

# Defaults for TrackingConfig
DEFAULT_LOOKAHEAD_CELLS = 3.0
DEFAULT_SENSING_RADIUS = 5.0
DEFAULT_REPLAN_CELLS = 3.0
DEFAULT_CORRIDOR_CELLS = 4

# Defaults for Scenario
DEFAULT_SIM_DT = 0.1
DEFAULT_MAX_SIM_TIME = 120.0


@dataclass(frozen=True)
class DynamicObstacle:
    """An obstacle unknown to the global planner.

    Without waypoints it moves at constant ``velocity``. With waypoints it
    runs the closed loop ``position -> waypoints... -> position`` at the
    speed ``|velocity|``.

    Example:
        >>> ob = DynamicObstacle((0.0, 0.0), 0.3, (1.0, 0.0), ((2.0, 0.0),))
        >>> ob.state_at(3.0)
        (1.0, 0.0, -1.0, 0.0)
        >>> DynamicObstacle((1.0, 1.0), 0.5).state_at(10.0)
        (1.0, 1.0, 0.0, 0.0)
    """

    position: tuple[float, float]
    radius: float
    velocity: tuple[float, float] = (0.0, 0.0)
    waypoints: tuple[tuple[float, float], ...] = ()

    def __post_init__(self) -> None:
        """Validate the obstacle."""
        if not math.isfinite(self.radius) or self.radius <= 0:
            raise ConfigurationError(f"radius must be positive, got {self.radius}")
        points = (self.position, self.velocity, *self.waypoints)
        values = [c for point in points for c in point]
        if not all(math.isfinite(v) for v in values):
            raise ConfigurationError("obstacle motion must be finite")

    @property
    def speed(self) -> float:
        return math.hypot(*self.velocity)

    def state_at(self, t: float) -> tuple[float, float, float, float]:
        """Position and velocity ``(x, y, vx, vy)`` after ``t`` seconds."""
        x0, y0 = self.position
        if not self.waypoints:
            vx, vy = self.velocity
            return (x0 + vx * t, y0 + vy * t, vx, vy)
        loop = [self.position, *self.waypoints, self.position]
        lengths = [math.dist(a, b) for a, b in pairwise(loop)]
        perimeter = sum(lengths)
        if perimeter == 0 or self.speed == 0:
            return (x0, y0, 0.0, 0.0)
        s = math.fmod(self.speed * t, perimeter)
        for (a, b), length in zip(pairwise(loop), lengths, strict=True):
            if length == 0:
                continue
            if s <= length:
                ux, uy = (b[0] - a[0]) / length, (b[1] - a[1]) / length
                return (
                    a[0] + ux * s,
                    a[1] + uy * s,
                    ux * self.speed,
                    uy * self.speed,
                )
            s -= length
        return (x0, y0, 0.0, 0.0)

    def disc_at(self, t: float) -> DiscObstacle:
        """The obstacle as a disc with its instantaneous velocity."""
        x, y, vx, vy = self.state_at(t)
        return DiscObstacle(x, y, self.radius, vx, vy)


@dataclass(frozen=True)
class TrackingConfig:
    """Executor parameters.

    Attributes:
        lookahead_cells: The active waypoint is the first path point farther
            than this many cells from the robot.
        sensing_radius: Unknown obstacles closer than this (m) are visible.
        replan_cells: Cross-track distance in cells that triggers replanning.
        corridor_cells: Cells around the path searched for walls to overlay.
        use_dwa: False swaps the local planner for a heading tracker that
            ignores obstacles.

    Example:
        >>> TrackingConfig(lookahead_cells=0)
        Traceback (most recent call last):
        ...
        mmplanner.core.exceptions.ConfigurationError: lookahead_cells must be ...
    """

    lookahead_cells: float = DEFAULT_LOOKAHEAD_CELLS
    sensing_radius: float = DEFAULT_SENSING_RADIUS
    replan_cells: float = DEFAULT_REPLAN_CELLS
    corridor_cells: int = DEFAULT_CORRIDOR_CELLS
    use_dwa: bool = True

    def __post_init__(self) -> None:
        """Validate configuration values."""
        for name in ("lookahead_cells", "sensing_radius", "replan_cells"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ConfigurationError(f"{name} must be positive, got {value}")
        if self.corridor_cells < 0:
            raise ConfigurationError(
                f"corridor_cells must be non-negative, got {self.corridor_cells}"
            )


@dataclass(frozen=True)
class Scenario:
    """One experiment: a map, a robot, its task and the unknown obstacles.

    Attributes:
        scenario_id: Name used in logs and benchmark rows.
        map_ref: Map file path, relative to the scenario file.
        start: Start cell.
        goal: Goal cell.
        profile: Robot profile.
        strategy: Global search strategy.
        metric: Heuristic metric.
        unknown_obstacles: Obstacles only the executor sees.
        dwa: Local planner parameters.
        seed: Recorded with every run so rows can be re-derived.
        sim_dt: Simulation step in seconds.
        max_sim_time: Simulated seconds before a timeout.
        tracking: Executor parameters.
        planner: Global planner parameters.
    """

    scenario_id: str
    map_ref: str
    start: CellIndex
    goal: CellIndex
    profile: RobotProfile = field(default_factory=RobotProfile)
    strategy: Strategy = Strategy.MULTIMODAL
    metric: Metric = Metric.OCTILE
    unknown_obstacles: tuple[DynamicObstacle, ...] = ()
    dwa: DwaParams = field(default_factory=DwaParams)
    seed: int = 0
    sim_dt: float = DEFAULT_SIM_DT
    max_sim_time: float = DEFAULT_MAX_SIM_TIME
    tracking: TrackingConfig = field(default_factory=TrackingConfig)
    planner: PlannerConfig = field(default_factory=PlannerConfig)

    def __post_init__(self) -> None:
        """Validate configuration values."""
        if not (math.isfinite(self.sim_dt) and self.sim_dt > 0):
            raise ConfigurationError(f"sim_dt must be positive, got {self.sim_dt}")
        if not (math.isfinite(self.max_sim_time) and self.max_sim_time > 0):
            raise ConfigurationError(
                f"max_sim_time must be positive, got {self.max_sim_time}"
            )


class EventKind(StrEnum):
    """Execution log event kinds."""

    WAYPOINT_REACHED = "waypoint_reached"
    OBSTACLE_DETECTED = "obstacle_detected"
    OVERCOME = "overcome"
    REPLAN = "replan"
    COLLISION = "collision"
    GOAL_REACHED = "goal_reached"
    TIMEOUT = "timeout"
    NO_PATH = "no_path"

    @property
    def terminal(self) -> bool:
        return self in _TERMINAL


_TERMINAL = frozenset(
    {EventKind.COLLISION, EventKind.GOAL_REACHED, EventKind.TIMEOUT, EventKind.NO_PATH}
)


@dataclass(frozen=True)
class ExecutionEvent:
    """Something that happened at simulated time ``t``."""

    t: float
    kind: EventKind
    detail: dict[str, str | int | float] = field(default_factory=dict)


# One trajectory sample: t, x, y, theta, v, omega.
TrajectorySample = tuple[float, float, float, float, float, float]


@dataclass(frozen=True)
class ExecutionLog:
    """Outcome of one closed-loop simulation.

    Attributes:
        scenario_id: Scenario the log belongs to.
        seed: Scenario seed.
        trajectory: Robot state samples at every simulation step.
        events: Events in time order; the last one is terminal.
        min_clearance: Smallest gap between footprint and any obstacle over
            the run (m); infinite when nothing was ever in range.
        elapsed: Simulated seconds.
        max_cross_track: Largest distance from the global path (m).
    """

    scenario_id: str
    seed: int
    trajectory: tuple[TrajectorySample, ...]
    events: tuple[ExecutionEvent, ...]
    min_clearance: float
    elapsed: float
    max_cross_track: float = 0.0

    @property
    def outcome(self) -> EventKind | None:
        """The terminal event kind, if any."""
        terminal = [e.kind for e in self.events if e.kind.terminal]
        return terminal[-1] if terminal else None

    def count(self, kind: EventKind) -> int:
        """Number of events of one kind."""
        return sum(1 for e in self.events if e.kind is kind)
