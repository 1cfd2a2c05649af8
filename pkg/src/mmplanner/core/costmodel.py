"""Time-based cost model: travel, climbing and the search heuristic.

Every quantity is in seconds. Climbing cost is folded into edge costs so
the heuristic stays a pure travel-time bound.
"""

import math
from enum import StrEnum

from mmplanner.core.exceptions import ContractViolation
from mmplanner.core.gridmap import HeightGrid
from mmplanner.core.models import (
    CellIndex,
    EdgeCost,
    MoveKind,
    RobotProfile,
    TraversalClass,
)

SQRT2 = math.sqrt(2.0)


class Metric(StrEnum):
    """Distance metric behind the heuristic."""

    OCTILE = "octile"
    MANHATTAN = "manhattan"


def overcoming_time(delta_h: float, profile: RobotProfile) -> float:
    """Seconds spent climbing up or down a signed height change.

    Args:
        delta_h: Target height minus source height, in meters.
        profile: Robot climbing rates and thresholds.

    Raises:
        ContractViolation: If the change exceeds ``max_overcome_height``.

    Example:
        >>> profile = RobotProfile(max_overcome_height=1.0)
        >>> overcoming_time(1.0, profile)
        4.0
        >>> overcoming_time(-1.0, profile)
        3.0
        >>> overcoming_time(0.01, profile)
        0.0
    """
    step = abs(delta_h)
    if step > profile.max_overcome_height:
        raise ContractViolation(
            f"height change {delta_h} exceeds max_overcome_height "
            f"{profile.max_overcome_height}"
        )
    if step < profile.max_direct_height:
        return 0.0
    if delta_h > 0:
        return step * profile.t_up
    if delta_h < 0:
        return step * profile.t_down
    return 0.0


def heuristic_time(
    origin: CellIndex,
    goal: CellIndex,
    grid: HeightGrid,
    profile: RobotProfile,
    metric: Metric = Metric.OCTILE,
) -> float:
    """Lower-bound travel time from a cell to the goal.

    Example:
        >>> grid = HeightGrid.from_rows([[0.0] * 11] * 11)
        >>> origin = CellIndex(0, 0)
        >>> fast = RobotProfile(speed=2.0)
        >>> heuristic_time(origin, CellIndex(4, 6), grid, fast, Metric.MANHATTAN)
        5.0
        >>> round(heuristic_time(origin, CellIndex(3, 4), grid, RobotProfile()), 4)
        5.2426
    """
    dx = abs(goal.x - origin.x)
    dy = abs(goal.y - origin.y)
    if metric is Metric.MANHATTAN:
        cells = float(dx + dy)
    else:
        cells = max(dx, dy) + (SQRT2 - 1.0) * min(dx, dy)
    return cells * grid.cell_size / profile.speed


def travel_time(kind: MoveKind, grid: HeightGrid, profile: RobotProfile) -> float:
    """Seconds to cross one cell edge or diagonal at nominal speed."""
    length = grid.cell_size if kind is MoveKind.CARDINAL else SQRT2 * grid.cell_size
    return length / profile.speed


def step_cost(
    grid: HeightGrid,
    origin: CellIndex,
    target: CellIndex,
    kind: MoveKind,
    traversal: TraversalClass,
    profile: RobotProfile,
) -> EdgeCost:
    """Cost of one admissible step.

    Raises:
        ContractViolation: If the step is Blocked.

    Example:
        >>> grid = HeightGrid.from_rows([[0.0, 1.0]])
        >>> profile = RobotProfile(max_overcome_height=1.0)
        >>> cost = step_cost(grid, CellIndex(0, 0), CellIndex(1, 0),
        ...                  MoveKind.CARDINAL, TraversalClass.OVERCOME, profile)
        >>> cost.travel_time, cost.overcome_time, cost.total
        (1.0, 4.0, 5.0)
    """
    if traversal is TraversalClass.BLOCKED:
        raise ContractViolation(
            f"step {tuple(origin)} -> {tuple(target)} is Blocked and has no cost"
        )
    overcome = 0.0
    if traversal is TraversalClass.OVERCOME:
        delta_h = grid.height_at(target) - grid.height_at(origin)
        overcome = overcoming_time(delta_h, profile)
    return EdgeCost(
        travel_time=travel_time(kind, grid, profile), overcome_time=overcome
    )


def evaluate_f(g_time: float, h_time: float) -> float:
    """Evaluation function: time so far plus estimated time to go.

    Example:
        >>> evaluate_f(0.0, 0.0)
        0.0
        >>> evaluate_f(5.0, 2.5)
        7.5
    """
    return g_time + h_time


def switch_threshold(grid: HeightGrid, profile: RobotProfile) -> float:
    """Default climb time above which a barrier triggers wall following.

    Two cells of travel: a climb costing more than that is worth going
    around if a short detour exists.

    Example:
        >>> switch_threshold(HeightGrid.from_rows([[0.0]]), RobotProfile())
        2.0
    """
    return 2.0 * grid.cell_size / profile.speed
