"""Best-first global search: Abfs, Gbfs and the multimodal strategy.

All three strategies share one loop. They differ only in the open-list key
and in the multimodal hand-over to wall following.

Open-list entries are ordered by ``(key, -g, row-major index)``: key is f
for Abfs and Multimodal and h for Gbfs, rounded to 1e-9 s so that values
equal in exact arithmetic tie exactly. Ties prefer the deeper node, then the
lower index, which makes every run fully deterministic.
"""

import heapq
import time
from collections.abc import Callable
from itertools import pairwise

from mmplanner.core.costmodel import (
    Metric,
    evaluate_f,
    heuristic_time,
    step_cost,
    switch_threshold,
)
from mmplanner.core.exceptions import InternalConsistencyError
from mmplanner.core.gridmap import (
    OFFSETS,
    HeightGrid,
    Neighbor,
    classify_transition,
    neighbors,
)
from mmplanner.core.logs import get_logger
from mmplanner.core.metrics import timer
from mmplanner.core.models import CellIndex, RobotProfile, TraversalClass
from mmplanner.core.planner.results import (
    NoPath,
    PlannerConfig,
    PlanResult,
    SearchNode,
    SearchStats,
    Strategy,
    describe_path,
    reconstruct_path,
    totals_agree,
)
from mmplanner.core.planner.wallfollow import ObstacleBoundary, wall_follow_episode

_logger = get_logger(__name__)

# Decimal places kept in open-list keys.
KEY_DIGITS = 9


class _Search:
    """Open/closed bookkeeping for one plan invocation."""

    def __init__(
        self,
        grid: HeightGrid,
        start: CellIndex,
        goal: CellIndex,
        profile: RobotProfile,
        strategy: Strategy,
        metric: Metric,
        config: PlannerConfig,
    ) -> None:
        self.grid = grid
        self.start = start
        self.goal = goal
        self.profile = profile
        self.strategy = strategy
        self.metric = metric
        self.tolerance = config.tie_tolerance
        self.threshold = (
            config.switch_threshold
            if config.switch_threshold is not None
            else switch_threshold(grid, profile)
        )
        self.budget = (
            config.wall_follow_budget
            if config.wall_follow_budget is not None
            else 4 * (grid.width + grid.height)
        )
        self.boundary = ObstacleBoundary(grid, profile, self.threshold)

        self.g: dict[CellIndex, float] = {}
        self.nodes: dict[CellIndex, SearchNode] = {}
        self.closed: dict[CellIndex, SearchNode] = {}
        self.heap: list[tuple[float, float, int, CellIndex]] = []
        self.covered: set[CellIndex] = set()
        self.deferred: list[tuple[CellIndex, Neighbor]] = []
        self.deferral_enabled = strategy is Strategy.MULTIMODAL

        self.nodes_expanded = 0
        self.nodes_generated = 0
        self.mode_switches = 0
        self.jump_points = 0
        self.nodes_followed = 0

    def h(self, cell: CellIndex) -> float:
        return heuristic_time(cell, self.goal, self.grid, self.profile, self.metric)

    def push(self, node: SearchNode) -> None:
        """Insert or improve an open node."""
        if node.cell not in self.g:
            self.nodes_generated += 1
        self.g[node.cell] = node.g
        self.nodes[node.cell] = node
        primary = node.f if self.strategy is not Strategy.GBFS else self.h(node.cell)
        heapq.heappush(
            self.heap,
            (
                round(primary, KEY_DIGITS),
                -node.g,
                self.grid.index(node.cell),
                node.cell,
            ),
        )

    def offer(self, node: SearchNode) -> None:
        """Push a node unless the cell is closed or already reached cheaper."""
        if node.cell in self.closed:
            return
        known = self.g.get(node.cell)
        if known is None or node.g < known - self.tolerance:
            self.push(node)

    def relax(self, origin: SearchNode, step: Neighbor) -> None:
        cost = step_cost(
            self.grid, origin.cell, step.cell, step.kind, step.traversal, self.profile
        )
        g = origin.g + cost.total
        self.offer(
            SearchNode(
                cell=step.cell,
                g=g,
                f=evaluate_f(g, self.h(step.cell)),
                parent=origin.cell,
                via_overcome=step.traversal is TraversalClass.OVERCOME,
            )
        )

    def pop(self) -> SearchNode | None:
        """Pop the best live open node, skipping stale entries."""
        while self.heap:
            _, neg_g, _, cell = heapq.heappop(self.heap)
            if cell in self.closed or -neg_g != self.g[cell]:
                continue
            return self.nodes[cell]
        return None

    def expensive(self, origin: CellIndex, step: Neighbor) -> bool:
        if step.traversal is not TraversalClass.OVERCOME:
            return False
        cost = step_cost(
            self.grid, origin, step.cell, step.kind, step.traversal, self.profile
        )
        return cost.overcome_time > self.threshold

    def goalward_blocked(self, cell: CellIndex) -> bool:
        """True when every heuristic-improving neighbour is a barrier."""
        h0 = self.h(cell)
        improving = 0
        for dx, dy in OFFSETS:
            other = CellIndex(cell.x + dx, cell.y + dy)
            if not self.grid.contains(other):
                continue
            if self.h(other) >= h0 - self.tolerance:
                continue
            improving += 1
            if not self.boundary.blocks(cell, other):
                return False
        return improving > 0

    def ancestors(self, node: SearchNode) -> list[CellIndex]:
        chain: list[CellIndex] = []
        current: SearchNode | None = node
        while current is not None and current.parent is not None:
            chain.extend(current.via)
            chain.append(current.parent)
            current = self.closed.get(current.parent)
        return chain

    def switch(self, anchor: SearchNode) -> None:
        """Run one wall-follow episode from an expanded anchor."""
        episode = wall_follow_episode(
            self.grid,
            anchor,
            self.boundary,
            self.profile,
            self.budget,
            goal=self.goal,
            metric=self.metric,
            exclude=self.ancestors(anchor),
        )
        self.mode_switches += 1
        self.jump_points += len(episode.jump_points)
        self.nodes_followed += len(episode.followed)
        _logger.with_fields(
            anchor_x=anchor.cell.x,
            anchor_y=anchor.cell.y,
            jump_points=len(episode.jump_points),
            followed=len(episode.followed),
        ).debug("wall-follow episode")
        if not episode.jump_points:
            return
        self.covered.add(anchor.cell)
        self.covered.update(episode.followed)
        for jump in episode.jump_points:
            self.offer(jump)

    def restore_deferred(self) -> bool:
        """Re-admit deferred climbs once the open list runs dry."""
        if not self.deferred:
            return False
        _logger.with_fields(deferred=len(self.deferred)).debug(
            "restoring deferred climbs"
        )
        self.deferral_enabled = False
        pending, self.deferred = self.deferred, []
        for origin, step in pending:
            self.relax(self.closed[origin], step)
        return True

    def run(self) -> SearchNode | None:
        h0 = self.h(self.start)
        self.push(SearchNode(cell=self.start, g=0.0, f=evaluate_f(0.0, h0)))
        multimodal = self.strategy is Strategy.MULTIMODAL
        while True:
            node = self.pop()
            if node is None:
                if self.restore_deferred():
                    continue
                return None
            self.closed[node.cell] = node
            if node.cell == self.goal:
                return node
            self.nodes_expanded += 1
            if (
                multimodal
                and node.cell not in self.covered
                and self.goalward_blocked(node.cell)
            ):
                self.switch(node)
            for step in neighbors(self.grid, node.cell, self.profile):
                if step.cell in self.closed:
                    continue
                if (
                    self.deferral_enabled
                    and node.cell in self.covered
                    and self.expensive(node.cell, step)
                ):
                    self.deferred.append((node.cell, step))
                    continue
                self.relax(node, step)

    def stats(self, wall_clock: float) -> SearchStats:
        return SearchStats(
            nodes_expanded=self.nodes_expanded,
            nodes_generated=self.nodes_generated,
            mode_switches=self.mode_switches,
            jump_points=self.jump_points,
            nodes_followed=self.nodes_followed,
            wall_clock=wall_clock,
        )


def plan(
    grid: HeightGrid,
    start: CellIndex,
    goal: CellIndex,
    profile: RobotProfile,
    strategy: Strategy = Strategy.ABFS,
    metric: Metric | None = None,
    *,
    config: PlannerConfig | None = None,
    time_func: Callable[[], float] = time.perf_counter,
) -> PlanResult | NoPath:
    """Plan a global path on the height grid.

    Abfs pops the minimum f = g + h and is optimal with the octile metric.
    Gbfs pops the minimum h and ignores g in its ordering. Multimodal runs
    Abfs, but when an expanded cell's goal-ward steps are all barriers it
    walks the barrier greedily and feeds the resulting jump points back into
    the open list; expensive climbs out of cells an episode covered are then
    deferred until the open list would otherwise run dry.

    Closed cells are never re-expanded. An open cell is re-parented only
    when a g smaller by more than the tie tolerance is found.

    Args:
        grid: World model.
        start: Start cell.
        goal: Goal cell.
        profile: Robot profile.
        strategy: Search strategy.
        metric: Heuristic metric; overrides ``config.metric`` when given.
        config: Planner parameters.
        time_func: Clock for the wall-clock statistic.

    Returns:
        PlanResult, or NoPath when the open list empties.

    Raises:
        InputDomainError: If start or goal is off the grid.

    Example:
        >>> grid = HeightGrid.from_rows([[0.0] * 5] * 5)
        >>> result = plan(grid, CellIndex(0, 0), CellIndex(4, 4), RobotProfile())
        >>> round(result.total_time, 6), result.path_steps
        (5.656854, 4)
        >>> plan(grid, CellIndex(2, 2), CellIndex(2, 2), RobotProfile()).path
        (CellIndex(x=2, y=2),)
    """
    config = config or PlannerConfig()
    metric = metric or config.metric
    grid.require(start, "start")
    grid.require(goal, "goal")
    search = _Search(grid, start, goal, profile, strategy, metric, config)
    labels = {"strategy": str(strategy)}
    with timer("plan_wall_clock_seconds", labels, time_func=time_func) as clock:
        found = search.run()
    stats = search.stats(clock.elapsed)
    log = _logger.with_fields(
        strategy=str(strategy),
        nodes_expanded=stats.nodes_expanded,
        mode_switches=stats.mode_switches,
    )
    if found is None:
        log.info("no path found")
        return NoPath(start=start, goal=goal, strategy=str(strategy), stats=stats)

    path = reconstruct_path(search.closed, goal)
    steps, total = describe_path(grid, path, profile)
    if not totals_agree(total, found.g):
        raise InternalConsistencyError(
            f"recomputed path total {total} disagrees with search g {found.g}"
        )
    log.with_fields(total_time_s=total, path_steps=len(steps)).info("plan finished")
    return PlanResult(
        path=tuple(path),
        steps=steps,
        total_time=total,
        stats=stats,
        strategy=str(strategy),
        metric=metric,
        searched=tuple(search.closed),
    )


def check_transitions(
    grid: HeightGrid, result: PlanResult, profile: RobotProfile
) -> bool:
    """Return True if no move of the result crosses a Blocked step.

    Example:
        >>> grid = HeightGrid.from_rows([[0.0, 0.0, 0.0]])
        >>> result = plan(grid, CellIndex(0, 0), CellIndex(2, 0), RobotProfile())
        >>> check_transitions(grid, result, RobotProfile())
        True
    """
    return all(
        classify_transition(grid, a, b, profile) is not TraversalClass.BLOCKED
        for a, b in pairwise(result.path)
    )
