"""Greedy wall following for the multimodal strategy.

When best-first search reaches a cell whose every goal-ward step is a wall
or an expensive climb, the search hands over to a greedy walker that
follows the barrier in both directions. The first cell on each side whose
heuristic is no worse than the anchor's becomes a jump point and re-enters
best-first search with the g accumulated along the walk.
"""

from collections.abc import Iterable
from dataclasses import dataclass, field

from mmplanner.core.costmodel import Metric, heuristic_time, step_cost
from mmplanner.core.gridmap import OFFSETS, HeightGrid, move_kind
from mmplanner.core.gridmap import classify_transition as _classify
from mmplanner.core.models import CellIndex, MoveKind, RobotProfile, TraversalClass
from mmplanner.core.planner.results import SearchNode


@dataclass(frozen=True)
class ObstacleBoundary:
    """Which steps count as barriers for one robot.

    A step is a barrier when it is Blocked, or when it is a climb costing
    more than ``threshold`` seconds.

    Example:
        >>> grid = HeightGrid.from_rows([[0.0, 0.6], [0.0, 0.0]])
        >>> profile = RobotProfile(max_overcome_height=1.0)
        >>> boundary = ObstacleBoundary(grid, profile, threshold=2.0)
        >>> boundary.blocks(CellIndex(0, 0), CellIndex(1, 0))
        True
        >>> boundary.touches(CellIndex(0, 1))
        True
    """

    grid: HeightGrid
    profile: RobotProfile
    threshold: float

    def blocks(self, origin: CellIndex, target: CellIndex) -> bool:
        """Return True if the step between two adjacent cells is a barrier."""
        traversal = _classify(self.grid, origin, target, self.profile)
        if traversal is TraversalClass.BLOCKED:
            return True
        if traversal is TraversalClass.DIRECT:
            return False
        cost = step_cost(
            self.grid, origin, target, MoveKind.CARDINAL, traversal, self.profile
        )
        return cost.overcome_time > self.threshold

    def touches(self, cell: CellIndex) -> bool:
        """Return True if any step out of the cell is a barrier."""
        return any(self.blocks(cell, n) for n in self.adjacent(cell))

    def adjacent(self, cell: CellIndex) -> Iterable[CellIndex]:
        """In-bounds 8-neighbourhood of a cell, in the fixed offset order."""
        for dx, dy in OFFSETS:
            other = CellIndex(cell.x + dx, cell.y + dy)
            if self.grid.contains(other):
                yield other


@dataclass
class Episode:
    """Outcome of one wall-follow episode."""

    jump_points: list[SearchNode] = field(default_factory=list)
    followed: list[CellIndex] = field(default_factory=list)
    steps_used: int = 0


def wall_follow_episode(
    grid: HeightGrid,
    anchor: SearchNode,
    boundary: ObstacleBoundary,
    profile: RobotProfile,
    budget: int,
    *,
    goal: CellIndex,
    metric: Metric = Metric.OCTILE,
    exclude: Iterable[CellIndex] = (),
    tolerance: float = 1e-9,
) -> Episode:
    """Follow the barrier around ``anchor`` on both sides.

    Each side starts at a walkable cell next to the anchor that touches the
    barrier, preferring cardinal steps, then lower heuristic, then lower
    row-major index. The two sides are split by which side of the
    anchor-to-goal line the start cell lies on. From there the walker moves
    to the unvisited barrier-touching neighbour with the lowest heuristic.
    Both sides share ``budget`` (cells walked) and a visited set seeded with
    ``exclude`` and the anchor.

    Args:
        grid: World model.
        anchor: The expanded node whose goal-ward steps are all barriers.
        boundary: Barrier definition.
        profile: Robot profile used for step costs.
        budget: Maximum number of cells walked over both sides.
        goal: Search goal.
        metric: Heuristic metric.
        exclude: Cells the walker must not enter (the anchor's ancestors).
        tolerance: Slack on the "no worse than the anchor" comparison.

    Returns:
        The jump points (at most one per side), the cells walked that are
        not jump points, and the number of cells walked.

    Example:
        >>> rows = [[0.0] * 5 for _ in range(5)]
        >>> for x in range(1, 5):
        ...     rows[2][x] = 9.0
        >>> grid = HeightGrid.from_rows(rows)
        >>> profile = RobotProfile()
        >>> boundary = ObstacleBoundary(grid, profile, threshold=2.0)
        >>> anchor = SearchNode(CellIndex(3, 3), g=1.0, f=4.0)
        >>> episode = wall_follow_episode(
        ...     grid, anchor, boundary, profile, budget=40, goal=CellIndex(3, 0)
        ... )
        >>> [node.cell for node in episode.jump_points]
        [CellIndex(x=1, y=1)]
        >>> wall_follow_episode(
        ...     grid, anchor, boundary, profile, budget=0, goal=CellIndex(3, 0)
        ... ).jump_points
        []
    """
    episode = Episode()
    if budget <= 0:
        return episode

    def h(cell: CellIndex) -> float:
        return heuristic_time(cell, goal, grid, profile, metric)

    h_anchor = h(anchor.cell)
    visited: set[CellIndex] = {*exclude, anchor.cell}
    gx, gy = goal.x - anchor.cell.x, goal.y - anchor.cell.y

    def candidates(cell: CellIndex) -> list[CellIndex]:
        return [
            c
            for c in boundary.adjacent(cell)
            if c not in visited and not boundary.blocks(cell, c) and boundary.touches(c)
        ]

    left: list[CellIndex] = []
    right: list[CellIndex] = []
    for c in candidates(anchor.cell):
        cross = gx * (c.y - anchor.cell.y) - gy * (c.x - anchor.cell.x)
        if cross > 0:
            left.append(c)
        elif cross < 0:
            right.append(c)

    def start_key(c: CellIndex) -> tuple[int, float, int]:
        cardinal = move_kind(anchor.cell, c) is MoveKind.CARDINAL
        return (0 if cardinal else 1, h(c), grid.index(c))

    for side in (left, right):
        starts = [c for c in side if c not in visited]
        if not starts or episode.steps_used >= budget:
            continue
        current, g = anchor.cell, anchor.g
        segment: list[CellIndex] = []
        nxt: CellIndex | None = min(starts, key=start_key)
        while nxt is not None and episode.steps_used < budget:
            traversal = _classify(grid, current, nxt, profile)
            kind = move_kind(current, nxt)
            g += step_cost(grid, current, nxt, kind, traversal, profile).total
            episode.steps_used += 1
            visited.add(nxt)
            segment.append(nxt)
            current = nxt
            h_current = h(current)
            if h_current <= h_anchor + tolerance:
                episode.jump_points.append(
                    SearchNode(
                        cell=current,
                        g=g,
                        f=g + h_current,
                        parent=anchor.cell,
                        via_overcome=traversal is TraversalClass.OVERCOME,
                        via=tuple(segment[:-1]),
                    )
                )
                segment.pop()
                break
            options = candidates(current)
            nxt = None
            if options:
                nxt = min(options, key=lambda c: (h(c), grid.index(c)))
        episode.followed.extend(segment)
    return episode
