"""Uniform-cost ground truth for the global planners.

A plain Dijkstra search over the same neighbour and cost model. It keeps
its own queue, bookkeeping and path walk so that a bug in the best-first
search cannot leak into the reference answer.
"""

import heapq
import time
from collections.abc import Callable

from mmplanner.core.costmodel import Metric, step_cost
from mmplanner.core.gridmap import HeightGrid, Neighbor, neighbors
from mmplanner.core.metrics import timer
from mmplanner.core.models import CellIndex, RobotProfile, TraversalClass
from mmplanner.core.planner.results import (
    NoPath,
    PathStep,
    PlanResult,
    SearchStats,
    StepMode,
)

ORACLE_LABEL = "oracle"


def oracle_plan(
    grid: HeightGrid,
    start: CellIndex,
    goal: CellIndex,
    profile: RobotProfile,
    *,
    time_func: Callable[[], float] = time.perf_counter,
) -> PlanResult | NoPath:
    """Exact minimum-time path by uniform-cost search.

    Example:
        >>> grid = HeightGrid.from_rows([[0.0] * 5] * 5)
        >>> profile = RobotProfile()
        >>> result = oracle_plan(grid, CellIndex(0, 0), CellIndex(4, 4), profile)
        >>> round(result.total_time, 9)
        5.656854249
        >>> oracle_plan(grid, CellIndex(1, 1), CellIndex(1, 1), profile).total_time
        0.0
    """
    grid.require(start, "start")
    grid.require(goal, "goal")
    best: dict[CellIndex, float] = {start: 0.0}
    came_from: dict[CellIndex, tuple[CellIndex, PathStep]] = {}
    done: set[CellIndex] = set()
    queue: list[tuple[float, int, CellIndex]] = [(0.0, grid.index(start), start)]
    expanded = 0
    reached = False
    with timer("oracle_wall_clock_seconds", time_func=time_func) as clock:
        while queue:
            cost, _, cell = heapq.heappop(queue)
            if cell in done:
                continue
            done.add(cell)
            if cell == goal:
                reached = True
                break
            expanded += 1
            for step in neighbors(grid, cell, profile):
                if step.cell in done:
                    continue
                edge = step_cost(
                    grid, cell, step.cell, step.kind, step.traversal, profile
                ).total
                candidate = cost + edge
                if candidate < best.get(step.cell, float("inf")):
                    best[step.cell] = candidate
                    came_from[step.cell] = (cell, _step(grid, cell, step, edge))
                    heapq.heappush(
                        queue, (candidate, grid.index(step.cell), step.cell)
                    )
    stats = SearchStats(
        nodes_expanded=expanded,
        nodes_generated=len(best),
        wall_clock=clock.elapsed,
    )
    if not reached:
        return NoPath(start=start, goal=goal, strategy=ORACLE_LABEL, stats=stats)

    cells = [goal]
    steps: list[PathStep] = []
    while cells[-1] != start:
        previous, step = came_from[cells[-1]]
        steps.append(step)
        cells.append(previous)
    cells.reverse()
    steps.reverse()
    total = 0.0
    for step in steps:
        total += step.cost
    return PlanResult(
        path=tuple(cells),
        steps=tuple(steps),
        total_time=total,
        stats=stats,
        strategy=ORACLE_LABEL,
        metric=Metric.OCTILE,
    )


def _step(grid: HeightGrid, origin: CellIndex, step: Neighbor, edge: float) -> PathStep:
    cell, kind, traversal = step
    if traversal is TraversalClass.DIRECT:
        mode = StepMode.DIRECT
    elif grid.height_at(cell) > grid.height_at(origin):
        mode = StepMode.OVERCOME_UP
    else:
        mode = StepMode.OVERCOME_DOWN
    return PathStep(cell, kind, traversal, mode, edge)
