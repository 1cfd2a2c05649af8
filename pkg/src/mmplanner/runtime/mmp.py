"""Closed-loop execution: global plan, scene overlay and local tracking.

The executor plans once on the known map, then drives the robot along the
path with the dynamic-window planner. Known walls near the path and the
unknown obstacles currently in sensing range form the local obstacle set;
known steps the robot can climb are left out, and climbing one costs a
timed pause. A static obstacle sensed on the remaining path is masked into
a copy of the map and the path is replanned around it. The run ends on
reaching the goal, on a collision or at the time limit.
"""

import math
from collections import deque
from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import StrEnum
from itertools import pairwise

from mmplanner.core.costmodel import overcoming_time
from mmplanner.core.dwa import (
    DiscObstacle,
    RobotState,
    VelocityCommand,
    dwa_step,
    normalize_angle,
)
from mmplanner.core.exceptions import ConfigurationError
from mmplanner.core.gridmap import (
    CARDINAL_OFFSETS,
    OFFSETS,
    HeightGrid,
    classify_transition,
)
from mmplanner.core.logs import get_logger
from mmplanner.core.models import CellIndex, RobotProfile, TraversalClass
from mmplanner.core.planner.results import NoPath, PlanResult
from mmplanner.core.planner.search import plan
from mmplanner.core.scenario import (
    DynamicObstacle,
    EventKind,
    ExecutionEvent,
    ExecutionLog,
    Scenario,
    TrajectorySample,
)

_logger = get_logger(__name__)

# Heading tracker gain (rad/s per rad of error).
TRACKER_GAIN = 2.0


class ReplanDecision(StrEnum):
    """Outcome of a cross-track check."""

    CONTINUE = "continue"
    REPLAN = "replan"


def path_points(
    grid: HeightGrid, path: Sequence[CellIndex]
) -> list[tuple[float, float]]:
    """Cell centres of a path, in meters."""
    return [grid.cell_center(cell) for cell in path]


def _segment_distance(
    p: tuple[float, float], a: tuple[float, float], b: tuple[float, float]
) -> float:
    ax, ay = a
    dx, dy = b[0] - ax, b[1] - ay
    length_sq = dx * dx + dy * dy
    if length_sq == 0:
        return math.dist(p, a)
    s = ((p[0] - ax) * dx + (p[1] - ay) * dy) / length_sq
    s = min(1.0, max(0.0, s))
    return math.dist(p, (ax + s * dx, ay + s * dy))


def cross_track_distance(
    point: tuple[float, float], points: Sequence[tuple[float, float]]
) -> float:
    """Distance from a point to a polyline.

    Example:
        >>> cross_track_distance((1.0, 2.0), [(0.0, 0.0), (4.0, 0.0)])
        2.0
        >>> cross_track_distance((1.0, 1.0), [(1.0, 1.0)])
        0.0
    """
    if len(points) == 1:
        return math.dist(point, points[0])
    return min(_segment_distance(point, a, b) for a, b in pairwise(points))


def replan_check(
    state: RobotState,
    path: Sequence[CellIndex],
    grid: HeightGrid,
    replan_cells: float = 3.0,
) -> ReplanDecision:
    """Request a replan when the robot strays too far from the path.

    Example:
        >>> grid = HeightGrid.from_rows([[0.0] * 10] * 10)
        >>> path = [CellIndex(x, 0) for x in range(10)]
        >>> replan_check(RobotState(3.5, 0.5, 0.0), path, grid)
        <ReplanDecision.CONTINUE: 'continue'>
        >>> replan_check(RobotState(3.5, 5.5, 0.0), path, grid)
        <ReplanDecision.REPLAN: 'replan'>
    """
    distance = cross_track_distance((state.x, state.y), path_points(grid, path))
    if distance > replan_cells * grid.cell_size:
        return ReplanDecision.REPLAN
    return ReplanDecision.CONTINUE


def _reachable(
    grid: HeightGrid, seeds: Sequence[CellIndex], profile: RobotProfile
) -> set[CellIndex]:
    """Cells connected to the seeds by non-Blocked moves."""
    seen = set(seeds)
    queue = deque(seeds)
    while queue:
        cell = queue.popleft()
        for dx, dy in OFFSETS:
            other = CellIndex(cell.x + dx, cell.y + dy)
            if other in seen or not grid.contains(other):
                continue
            traversal = classify_transition(grid, cell, other, profile)
            if traversal is TraversalClass.BLOCKED:
                continue
            seen.add(other)
            queue.append(other)
    return seen


def known_wall_discs(
    grid: HeightGrid,
    path: Sequence[CellIndex],
    profile: RobotProfile,
    corridor_cells: int = 4,
) -> list[DiscObstacle]:
    """Known cells near the path that the robot can neither drive nor climb.

    A corridor cell off the path is a wall when no chain of Direct or
    Overcome moves connects it to the path, or when it rises above a
    reachable face-on neighbour by a Blocked step. Each wall cell becomes a
    disc of radius half a cell at its centre, in row-major order.

    Example:
        >>> grid = HeightGrid.from_rows([[0.0] * 4, [0.0, 0.8, 0.4, 0.0]])
        >>> path = [CellIndex(x, 0) for x in range(4)]
        >>> [(d.x, d.y) for d in known_wall_discs(grid, path, RobotProfile())]
        [(1.5, 1.5)]
    """
    if not path:
        return []
    on_path = set(path)
    reachable = _reachable(grid, list(path), profile)
    corridor: set[CellIndex] = set()
    for cell in path:
        for dy in range(-corridor_cells, corridor_cells + 1):
            for dx in range(-corridor_cells, corridor_cells + 1):
                other = CellIndex(cell.x + dx, cell.y + dy)
                if grid.contains(other):
                    corridor.add(other)

    def walled_off(cell: CellIndex) -> bool:
        height = grid.height_at(cell)
        for dx, dy in CARDINAL_OFFSETS:
            side = CellIndex(cell.x + dx, cell.y + dy)
            if side not in reachable or grid.height_at(side) >= height:
                continue
            step = classify_transition(grid, side, cell, profile)
            if step is TraversalClass.BLOCKED:
                return True
        return False

    radius = 0.5 * grid.cell_size
    discs = []
    for cell in sorted(corridor - on_path, key=grid.index):
        if cell in reachable and not walled_off(cell):
            continue
        x, y = grid.cell_center(cell)
        discs.append(DiscObstacle(x, y, radius))
    return discs


def build_obstacle_overlay(
    grid: HeightGrid,
    path: PlanResult | Sequence[CellIndex],
    unknown: Sequence[DynamicObstacle],
    profile: RobotProfile,
    time: float = 0.0,
    *,
    corridor_cells: int = 4,
    origin: tuple[float, float] | None = None,
    sensing_radius: float | None = None,
) -> list[DiscObstacle]:
    """Obstacle set for the local planner at a given time.

    Known walls around the path plus the unknown obstacles advanced to
    ``time``. Surmountable known steps are left out. With ``origin`` and
    ``sensing_radius`` only discs whose edge lies within range are kept.

    Example:
        >>> grid = HeightGrid.from_rows([[0.0, 0.3, 0.0], [0.0, 0.0, 0.0]])
        >>> path = [CellIndex(0, 0), CellIndex(1, 0), CellIndex(2, 0)]
        >>> build_obstacle_overlay(grid, path, [], RobotProfile())
        []
    """
    cells = path.path if isinstance(path, PlanResult) else path
    discs = known_wall_discs(grid, cells, profile, corridor_cells)
    discs.extend(ob.disc_at(time) for ob in unknown)
    if origin is None or sensing_radius is None:
        return discs
    return [
        d
        for d in discs
        if math.dist(origin, (d.x, d.y)) - d.radius <= sensing_radius
    ]


def mask_obstacles(
    grid: HeightGrid,
    obstacles: Sequence[DiscObstacle],
    profile: RobotProfile,
    keep: Sequence[CellIndex] = (),
) -> HeightGrid:
    """Copy of the grid with sensed obstacles raised to impassable walls.

    Every cell whose centre lies within the obstacle radius plus the
    footprint plus half a cell diagonal is lifted above anything the robot
    can climb. Cells in ``keep`` are left alone.

    Example:
        >>> grid = HeightGrid.from_rows([[0.0] * 5] * 3)
        >>> disc = DiscObstacle(2.5, 1.5, 0.3)
        >>> masked = mask_obstacles(grid, [disc], RobotProfile())
        >>> [x for x in range(5) if masked.height_at(CellIndex(x, 1)) > 0]
        [1, 2, 3]
    """
    top = max(grid.heights) + profile.max_overcome_height + 1.0
    margin = profile.footprint_radius + 0.5 * math.sqrt(2) * grid.cell_size
    kept = set(keep)
    heights = list(grid.heights)
    for cell in grid.cells():
        if cell in kept:
            continue
        centre = grid.cell_center(cell)
        if any(math.dist(centre, (d.x, d.y)) <= d.radius + margin for d in obstacles):
            heights[grid.index(cell)] = top
    return HeightGrid(grid.width, grid.height, grid.cell_size, tuple(heights))


def entry_cost(
    grid: HeightGrid, origin: CellIndex, target: CellIndex, profile: RobotProfile
) -> float | None:
    """Climb time for the robot moving between two touching cells.

    Returns None when the move is impossible. A corner crossing counts as
    the cheaper of its two face-on routes, or as a Direct diagonal.

    Example:
        >>> grid = HeightGrid.from_rows([[0.0, 0.25], [0.0, 3.0]])
        >>> entry_cost(grid, CellIndex(0, 0), CellIndex(1, 0), RobotProfile())
        1.0
        >>> entry_cost(grid, CellIndex(0, 0), CellIndex(1, 1), RobotProfile()) is None
        True
    """

    def climb(a: CellIndex, b: CellIndex) -> float | None:
        traversal = classify_transition(grid, a, b, profile)
        if traversal is TraversalClass.BLOCKED:
            return None
        if traversal is TraversalClass.DIRECT:
            return 0.0
        return overcoming_time(grid.height_at(b) - grid.height_at(a), profile)

    dx, dy = target.x - origin.x, target.y - origin.y
    if abs(dx) + abs(dy) == 1:
        return climb(origin, target)
    if classify_transition(grid, origin, target, profile) is TraversalClass.DIRECT:
        return 0.0
    options = []
    for middle in (CellIndex(target.x, origin.y), CellIndex(origin.x, target.y)):
        first = climb(origin, middle)
        second = climb(middle, target) if first is not None else None
        if first is not None and second is not None:
            options.append(first + second)
    return min(options) if options else None


def integrate(state: RobotState, cmd: VelocityCommand, dt: float) -> RobotState:
    """Exact unicycle motion under a constant command.

    Example:
        >>> s = integrate(RobotState(0.0, 0.0, 0.0), VelocityCommand(1.0, 0.0), 0.5)
        >>> s.x, s.y, s.v
        (0.5, 0.0, 1.0)
    """
    theta = state.theta + cmd.omega * dt
    if abs(cmd.omega) > 1e-9:
        radius = cmd.v / cmd.omega
        x = state.x + radius * (math.sin(theta) - math.sin(state.theta))
        y = state.y - radius * (math.cos(theta) - math.cos(state.theta))
    else:
        x = state.x + cmd.v * dt * math.cos(state.theta)
        y = state.y + cmd.v * dt * math.sin(state.theta)
    return RobotState(x, y, theta, cmd.v, cmd.omega)


def heading_tracker(
    state: RobotState,
    target: tuple[float, float],
    profile: RobotProfile,
    dt: float,
) -> VelocityCommand:
    """Obstacle-blind controller steering straight at the target.

    Respects the velocity and acceleration limits of the profile.
    """
    error = normalize_angle(
        math.atan2(target[1] - state.y, target[0] - state.x) - state.theta
    )
    omega_goal = max(-profile.omega_max, min(profile.omega_max, TRACKER_GAIN * error))
    v_goal = profile.v_max if abs(error) < math.pi / 4 else profile.v_min
    dv, dw = profile.accel_v * dt, profile.accel_omega * dt
    v = min(max(v_goal, state.v - dv), state.v + dv)
    omega = min(max(omega_goal, state.omega - dw), state.omega + dw)
    v = min(max(v, profile.v_min), profile.v_max)
    return VelocityCommand(v, omega)


@dataclass
class _Run:
    """Mutable state of one simulation."""

    grid: HeightGrid
    scenario: Scenario
    use_dwa: bool
    state: RobotState
    path: list[CellIndex]
    points: list[tuple[float, float]]
    walls: list[DiscObstacle]
    t: float = 0.0
    progress: int = 0
    trajectory: list[TrajectorySample] = field(default_factory=list)
    events: list[ExecutionEvent] = field(default_factory=list)
    detected: set[int] = field(default_factory=set)
    masked: set[int] = field(default_factory=set)
    min_clearance: float = math.inf
    max_cross_track: float = 0.0
    last_replan_cell: CellIndex | None = None

    @property
    def cell_size(self) -> float:
        return self.grid.cell_size

    def record(self) -> None:
        s = self.state
        self.trajectory.append((self.t, s.x, s.y, s.theta, s.v, s.omega))

    def event(self, kind: EventKind, **detail: str | int | float) -> None:
        self.events.append(ExecutionEvent(self.t, kind, dict(detail)))

    def position(self) -> tuple[float, float]:
        return (self.state.x, self.state.y)

    def sense(self) -> list[DiscObstacle]:
        """Unknown obstacles in range now; first sightings are logged."""
        visible = []
        radius = self.scenario.tracking.sensing_radius
        for index, ob in enumerate(self.scenario.unknown_obstacles):
            disc = ob.disc_at(self.t)
            if math.dist(self.position(), (disc.x, disc.y)) - disc.radius > radius:
                continue
            visible.append(disc)
            if index not in self.detected:
                self.detected.add(index)
                self.event(EventKind.OBSTACLE_DETECTED, index=index)
        return visible

    def obstacle_gap(self) -> tuple[float, int]:
        """Smallest footprint gap to any unknown obstacle and its index."""
        best, which = math.inf, -1
        footprint = self.scenario.profile.footprint_radius
        for index, ob in enumerate(self.scenario.unknown_obstacles):
            x, y, _, _ = ob.state_at(self.t)
            gap = math.dist(self.position(), (x, y)) - ob.radius - footprint
            if gap < best:
                best, which = gap, index
        return best, which

    def advance_progress(self) -> None:
        """Move the progress index to the nearest upcoming path point."""
        window = self.points[self.progress : self.progress + 2 * self._lookahead() + 2]
        here = self.position()
        nearest = min(range(len(window)), key=lambda i: math.dist(here, window[i]))
        if nearest > 0:
            self.progress += nearest
            self.event(EventKind.WAYPOINT_REACHED, index=self.progress)

    def _lookahead(self) -> int:
        return max(1, math.ceil(self.scenario.tracking.lookahead_cells))

    def target(self) -> tuple[float, float]:
        """First path point beyond the lookahead distance, else the goal."""
        reach = self.scenario.tracking.lookahead_cells * self.cell_size
        here = self.position()
        for point in self.points[self.progress + 1 :]:
            if math.dist(here, point) > reach:
                return point
        return self.points[-1]

    def check_blocked(self) -> None:
        """Replan when a sensed static obstacle sits on the remaining path."""
        if not self.use_dwa:
            return
        footprint = self.scenario.profile.footprint_radius
        ahead = self.points[self.progress :]
        fresh = False
        for index, ob in enumerate(self.scenario.unknown_obstacles):
            if index not in self.detected or index in self.masked or ob.speed > 0:
                continue
            disc = ob.disc_at(self.t)
            if cross_track_distance((disc.x, disc.y), ahead) <= disc.radius + footprint:
                self.masked.add(index)
                fresh = True
        if fresh:
            cell = self.grid.cell_at_point(*self.position())
            if cell is not None:
                self.replan(cell, "blocked")

    def maybe_replan(self) -> None:
        tracking = self.scenario.tracking
        here = self.position()
        distance = cross_track_distance(here, self.points)
        self.max_cross_track = max(self.max_cross_track, distance)
        if distance <= tracking.replan_cells * self.cell_size:
            return
        cell = self.grid.cell_at_point(*here)
        if cell is None or cell == self.last_replan_cell:
            return
        self.last_replan_cell = cell
        self.replan(cell, "cross_track")

    def planning_grid(self, cell: CellIndex) -> HeightGrid:
        """Known map with masked obstacles raised; ``cell`` and goal stay free."""
        if not self.masked:
            return self.grid
        scenario = self.scenario
        unknown = scenario.unknown_obstacles
        discs = [unknown[i].disc_at(self.t) for i in sorted(self.masked)]
        keep = (cell, scenario.goal)
        return mask_obstacles(self.grid, discs, scenario.profile, keep)

    def replan(self, cell: CellIndex, reason: str) -> None:
        """Plan again from ``cell``; the old path stays when none is found."""
        scenario = self.scenario
        result = plan(
            self.planning_grid(cell),
            cell,
            scenario.goal,
            scenario.profile,
            scenario.strategy,
            scenario.metric,
            config=scenario.planner,
        )
        found = isinstance(result, PlanResult)
        self.event(
            EventKind.REPLAN, x=cell.x, y=cell.y, found=int(found), reason=reason
        )
        _logger.with_fields(
            scenario_id=scenario.scenario_id,
            cell_x=cell.x,
            cell_y=cell.y,
            found=found,
            reason=reason,
        ).info("replanned")
        if isinstance(result, PlanResult):
            self.path = list(result.path)
            self.points = path_points(self.grid, self.path)
            self.walls = known_wall_discs(
                self.grid,
                self.path,
                scenario.profile,
                scenario.tracking.corridor_cells,
            )
            self.progress = 0

    def command(self, visible: list[DiscObstacle]) -> VelocityCommand:
        scenario = self.scenario
        target = self.target()
        if not self.use_dwa:
            profile, dt = scenario.profile, scenario.sim_dt
            return heading_tracker(self.state, target, profile, dt)
        radius = scenario.tracking.sensing_radius
        here = self.position()
        local = [
            d for d in self.walls if math.dist(here, (d.x, d.y)) - d.radius <= radius
        ]
        dwa = scenario.dwa
        cmd, _ = dwa_step(self.state, target, [*local, *visible], scenario.profile, dwa)
        return cmd

    def pause(self, duration: float) -> None:
        """Hold the robot in place while it climbs."""
        held = RobotState(self.state.x, self.state.y, self.state.theta, 0.0, 0.0)
        self.state = held
        end = self.t + duration
        dt = self.scenario.sim_dt
        while self.t + dt < end - 1e-12:
            self.t += dt
            self.record()
        self.t = end
        self.record()


def _validate(grid: HeightGrid, scenario: Scenario, initial: RobotState) -> None:
    grid.require(scenario.start, "start")
    grid.require(scenario.goal, "goal")
    profile = scenario.profile
    if scenario.sim_dt * profile.v_max >= grid.cell_size:
        raise ConfigurationError(
            "sim_dt * v_max must stay below the cell size, got "
            f"{scenario.sim_dt * profile.v_max} >= {grid.cell_size}"
        )
    if abs(initial.v) > profile.v_max:
        raise ConfigurationError(
            f"initial |v| must not exceed v_max, got {initial.v} > {profile.v_max}"
        )
    if abs(initial.omega) > profile.omega_max:
        raise ConfigurationError(
            "initial |omega| must not exceed omega_max, got "
            f"{initial.omega} > {profile.omega_max}"
        )


def track(
    grid: HeightGrid,
    scenario: Scenario,
    *,
    use_dwa: bool | None = None,
    initial_state: RobotState | None = None,
) -> ExecutionLog:
    """Simulate the scenario in closed loop.

    Args:
        grid: Known map.
        scenario: Task, robot, unknown obstacles and parameters.
        use_dwa: Overrides ``scenario.tracking.use_dwa``; False drives the
            obstacle-blind heading tracker instead.
        initial_state: Heading and velocities at the start. The position is
            always the centre of the start cell. By default the robot rests
            facing along the first path segment.

    Returns:
        The execution log. NoPath, collision and timeout are outcomes
        recorded as terminal events, not errors.

    Raises:
        InputDomainError: If start or goal is off the map.
        ConfigurationError: If one simulation step can skip a cell, or the
            initial velocities exceed the profile limits.
    """
    _validate(grid, scenario, initial_state or RobotState(0.0, 0.0, 0.0))
    dwa_on = scenario.tracking.use_dwa if use_dwa is None else use_dwa
    log = _logger.with_fields(scenario_id=scenario.scenario_id, dwa=dwa_on)
    profile = scenario.profile
    start_xy = grid.cell_center(scenario.start)
    initial = plan(
        grid,
        scenario.start,
        scenario.goal,
        profile,
        scenario.strategy,
        scenario.metric,
        config=scenario.planner,
    )
    if isinstance(initial, NoPath):
        sample = (0.0, start_xy[0], start_xy[1], 0.0, 0.0, 0.0)
        log.info("simulation finished without a global path")
        return ExecutionLog(
            scenario_id=scenario.scenario_id,
            seed=scenario.seed,
            trajectory=(sample,),
            events=(ExecutionEvent(0.0, EventKind.NO_PATH),),
            min_clearance=math.inf,
            elapsed=0.0,
        )

    path = list(initial.path)
    points = path_points(grid, path)
    if initial_state is None:
        heading = (
            math.atan2(points[1][1] - points[0][1], points[1][0] - points[0][0])
            if len(points) > 1
            else 0.0
        )
        state = RobotState(start_xy[0], start_xy[1], heading)
    else:
        s = initial_state
        state = RobotState(start_xy[0], start_xy[1], s.theta, s.v, s.omega)
    run = _Run(
        grid=grid,
        scenario=scenario,
        use_dwa=dwa_on,
        state=state,
        path=path,
        points=points,
        walls=known_wall_discs(grid, path, profile, scenario.tracking.corridor_cells),
    )
    run.record()
    goal_xy = grid.cell_center(scenario.goal)
    tolerance = scenario.dwa.resolved_goal_tolerance(grid.cell_size)
    cell = scenario.start

    while True:
        gap, which = run.obstacle_gap()
        run.min_clearance = min(run.min_clearance, gap)
        if gap <= 0:
            run.event(EventKind.COLLISION, reason="obstacle", index=which)
            break
        visible = run.sense()
        if math.dist(run.position(), goal_xy) <= tolerance:
            run.event(EventKind.GOAL_REACHED)
            break
        if run.t >= scenario.max_sim_time - 1e-9:
            run.event(EventKind.TIMEOUT)
            break
        run.check_blocked()
        run.maybe_replan()
        cmd = run.command(visible)
        run.state = integrate(run.state, cmd, scenario.sim_dt)
        run.t += scenario.sim_dt
        run.record()
        run.advance_progress()

        entered = grid.cell_at_point(*run.position())
        if entered is None:
            run.min_clearance = min(run.min_clearance, 0.0)
            run.event(EventKind.COLLISION, reason="off_map")
            break
        if entered != cell:
            climb = entry_cost(grid, cell, entered, profile)
            if climb is None:
                run.min_clearance = min(run.min_clearance, 0.0)
                run.event(
                    EventKind.COLLISION, reason="terrain", x=entered.x, y=entered.y
                )
                break
            cell = entered
            if climb > 0:
                run.event(
                    EventKind.OVERCOME, x=cell.x, y=cell.y, duration_s=climb
                )
                run.pause(climb)

    result = ExecutionLog(
        scenario_id=scenario.scenario_id,
        seed=scenario.seed,
        trajectory=tuple(run.trajectory),
        events=tuple(run.events),
        min_clearance=run.min_clearance,
        elapsed=run.t,
        max_cross_track=run.max_cross_track,
    )
    log.with_fields(
        outcome=str(result.outcome),
        elapsed_s=result.elapsed,
        replans=result.count(EventKind.REPLAN),
    ).info("simulation finished")
    return result
