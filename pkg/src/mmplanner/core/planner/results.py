"""Planner value types: strategies, search records, results and config."""

import math
from collections.abc import Mapping
from dataclasses import dataclass, field
from enum import StrEnum
from itertools import pairwise

from mmplanner.core.costmodel import Metric, step_cost
from mmplanner.core.exceptions import (
    ConfigurationError,
    InputDomainError,
    InternalConsistencyError,
)
from mmplanner.core.gridmap import HeightGrid, classify_transition, move_kind
from mmplanner.core.models import CellIndex, MoveKind, RobotProfile, TraversalClass

# Tolerance used when a recomputed path total is compared with the search's g.
TOTAL_TOLERANCE = 1e-9


class Strategy(StrEnum):
    """Global search strategy.

    Example:
        >>> Strategy.parse("astar")
        <Strategy.ABFS: 'abfs'>
        >>> Strategy.parse("greedy")
        <Strategy.GBFS: 'gbfs'>
    """

    ABFS = "abfs"
    GBFS = "gbfs"
    MULTIMODAL = "multimodal"

    @classmethod
    def parse(cls, name: str) -> "Strategy":
        """Resolve a strategy name, accepting the CLI aliases astar/greedy."""
        aliases = {"astar": cls.ABFS, "greedy": cls.GBFS}
        key = name.strip().lower()
        if key in aliases:
            return aliases[key]
        try:
            return cls(key)
        except ValueError as e:
            raise ConfigurationError(
                f"strategy must be one of abfs, gbfs, multimodal, astar, greedy, "
                f"got {name!r}"
            ) from e


class StepMode(StrEnum):
    """Per-step tag in serialized plans."""

    DIRECT = "direct"
    OVERCOME_UP = "overcome_up"
    OVERCOME_DOWN = "overcome_down"


@dataclass(frozen=True)
class SearchNode:
    """Open/closed list record.

    ``via`` holds the cells walked between ``parent`` and ``cell`` when the
    node is a jump point; for ordinary nodes it is empty and ``parent`` is
    adjacent to ``cell``.
    """

    cell: CellIndex
    g: float
    f: float
    parent: CellIndex | None = None
    via_overcome: bool = False
    via: tuple[CellIndex, ...] = ()


@dataclass(frozen=True)
class SearchStats:
    """Search counters.

    Attributes:
        nodes_expanded: Cells popped from the open list and expanded.
        nodes_generated: Distinct cells ever inserted into the open list.
        mode_switches: Wall-follow episodes entered.
        jump_points: Jump points emitted by those episodes.
        nodes_followed: Cells walked by episodes without being expanded.
        wall_clock: Seconds spent searching; excluded from equality.
    """

    nodes_expanded: int = 0
    nodes_generated: int = 0
    mode_switches: int = 0
    jump_points: int = 0
    nodes_followed: int = 0
    wall_clock: float = field(default=0.0, compare=False)


@dataclass(frozen=True)
class PathStep:
    """One move of a path, ending in ``cell``."""

    cell: CellIndex
    kind: MoveKind
    traversal: TraversalClass
    mode: StepMode
    cost: float


@dataclass(frozen=True)
class PlanResult:
    """A found path with its cost and search statistics.

    Attributes:
        path: Cells from start to goal.
        steps: One entry per move (``len(path) - 1`` entries).
        total_time: Sum of step totals along the path, in seconds.
        stats: Search counters.
        strategy: Label of the planner that produced the result.
        metric: Heuristic metric used.
        searched: Expanded cells in expansion order (the search footprint).
    """

    path: tuple[CellIndex, ...]
    steps: tuple[PathStep, ...]
    total_time: float
    stats: SearchStats
    strategy: str
    metric: Metric = Metric.OCTILE
    searched: tuple[CellIndex, ...] = ()

    @property
    def path_steps(self) -> int:
        """Number of moves along the path."""
        return len(self.steps)

    @property
    def overcome_steps(self) -> int:
        """Number of climbing moves along the path."""
        return sum(1 for s in self.steps if s.traversal is TraversalClass.OVERCOME)


@dataclass(frozen=True)
class NoPath:
    """The open list emptied before the goal was reached."""

    start: CellIndex
    goal: CellIndex
    strategy: str
    stats: SearchStats = field(default_factory=SearchStats)
    reason: str = "open list exhausted"


# Defaults for PlannerConfig
DEFAULT_TIE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class PlannerConfig:
    """Tunable planner parameters.

    Attributes:
        metric: Heuristic metric.
        switch_threshold: Climb time (s) above which a barrier triggers wall
            following. None means two cells of travel time.
        wall_follow_budget: Cells an episode may walk. None means
            ``4 * (width + height)``.
        tie_tolerance: Minimum g improvement that re-parents an open node.

    Example:
        >>> PlannerConfig(wall_follow_budget=-1)
        Traceback (most recent call last):
        ...
        mmplanner.core.exceptions.ConfigurationError: wall_follow_budget must ...
    """

    metric: Metric = Metric.OCTILE
    switch_threshold: float | None = None
    wall_follow_budget: int | None = None
    tie_tolerance: float = DEFAULT_TIE_TOLERANCE

    def __post_init__(self) -> None:
        """Validate configuration values."""
        if self.switch_threshold is not None and not self.switch_threshold >= 0:
            raise ConfigurationError(
                f"switch_threshold must be non-negative, got {self.switch_threshold}"
            )
        if self.wall_follow_budget is not None and self.wall_follow_budget < 0:
            raise ConfigurationError(
                "wall_follow_budget must be non-negative, "
                f"got {self.wall_follow_budget}"
            )
        if not (math.isfinite(self.tie_tolerance) and self.tie_tolerance >= 0):
            raise ConfigurationError(
                f"tie_tolerance must be non-negative, got {self.tie_tolerance}"
            )


def reconstruct_path(
    closed: Mapping[CellIndex, SearchNode], goal: CellIndex
) -> list[CellIndex]:
    """Walk parent pointers from the goal back to the start.

    Jump-point segments stored in ``via`` are spliced back in.

    Raises:
        InternalConsistencyError: If the goal is missing, a parent is not in
            the closed set, or the chain loops.

    Example:
        >>> a, b = CellIndex(0, 0), CellIndex(1, 0)
        >>> closed = {a: SearchNode(a, 0.0, 1.0), b: SearchNode(b, 1.0, 1.0, a)}
        >>> reconstruct_path(closed, b)
        [CellIndex(x=0, y=0), CellIndex(x=1, y=0)]
        >>> reconstruct_path(closed, a)
        [CellIndex(x=0, y=0)]
    """
    if goal not in closed:
        raise InternalConsistencyError(f"goal {tuple(goal)} is not in the closed set")
    reversed_path: list[CellIndex] = []
    seen: set[CellIndex] = set()
    node: SearchNode | None = closed[goal]
    while node is not None:
        if node.cell in seen:
            raise InternalConsistencyError(
                f"parent chain loops at {tuple(node.cell)}"
            )
        seen.add(node.cell)
        reversed_path.append(node.cell)
        reversed_path.extend(reversed(node.via))
        if node.parent is None:
            break
        if node.parent not in closed:
            raise InternalConsistencyError(
                f"parent {tuple(node.parent)} of {tuple(node.cell)} is not closed"
            )
        node = closed[node.parent]
    reversed_path.reverse()
    return reversed_path


def describe_path(
    grid: HeightGrid, path: list[CellIndex], profile: RobotProfile
) -> tuple[tuple[PathStep, ...], float]:
    """Classify and cost every move of a path.

    Returns:
        The per-move steps and their summed total, accumulated start to goal.

    Raises:
        InternalConsistencyError: If two consecutive cells are not adjacent
            or a move is Blocked.
    """
    steps: list[PathStep] = []
    total = 0.0
    for origin, target in pairwise(path):
        try:
            kind = move_kind(origin, target)
        except InputDomainError as e:
            raise InternalConsistencyError(str(e)) from e
        traversal = classify_transition(grid, origin, target, profile)
        if traversal is TraversalClass.BLOCKED:
            raise InternalConsistencyError(
                f"path crosses a Blocked step {tuple(origin)} -> {tuple(target)}"
            )
        cost = step_cost(grid, origin, target, kind, traversal, profile).total
        if traversal is TraversalClass.DIRECT:
            mode = StepMode.DIRECT
        elif grid.height_at(target) > grid.height_at(origin):
            mode = StepMode.OVERCOME_UP
        else:
            mode = StepMode.OVERCOME_DOWN
        steps.append(PathStep(target, kind, traversal, mode, cost))
        total += cost
    return tuple(steps), total


def totals_agree(recomputed: float, searched: float) -> bool:
    """Compare a recomputed path total with the search's g value."""
    return abs(recomputed - searched) <= TOTAL_TOLERANCE * max(1.0, abs(searched))
