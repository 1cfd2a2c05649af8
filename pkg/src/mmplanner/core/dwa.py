"""Dynamic-window local planner.

Candidate (v, omega) commands are sampled on a uniform grid inside the
window reachable within one control period, rolled out as constant-velocity
arcs over a short horizon, and scored with

    score = lam * G_clear + (1 - lam) * G_path

where G_clear is the normalised minimum clearance and G_path folds the
heading towards the active waypoint and the forward speed into one
alignment measure. Colliding rollouts score minus infinity.

Example:
    >>> profile = RobotProfile()
    >>> state = RobotState(0.0, 0.0, 0.0)
    >>> cmd, best = dwa_step(state, (5.0, 0.0), [], profile)
    >>> round(cmd.v, 6), abs(round(cmd.omega, 6))
    (0.1, 0.0)
"""

import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import numpy.typing as npt

from mmplanner.core.exceptions import ConfigurationError
from mmplanner.core.models import RobotProfile

FloatArray = npt.NDArray[np.float64]

# Angular rates below this are integrated as straight lines.
STRAIGHT_EPSILON = 1e-9

# Defaults for DwaParams
DEFAULT_LAMBDA = 0.5
DEFAULT_DT = 0.1
DEFAULT_HORIZON = 2.0
DEFAULT_V_SAMPLES = 11
DEFAULT_OMEGA_SAMPLES = 21
DEFAULT_HEADING_WEIGHT = 0.7
DEFAULT_VELOCITY_WEIGHT = 0.3
DEFAULT_CLEAR_CAP = 0.5


def normalize_angle(angle: float) -> float:
    """Wrap an angle into (-pi, pi].

    Example:
        >>> round(normalize_angle(2.5 * math.pi), 9) == round(math.pi / 2, 9)
        True
        >>> normalize_angle(-math.pi) == math.pi
        True
    """
    wrapped = math.remainder(angle, math.tau)
    return math.pi if wrapped <= -math.pi else wrapped


@dataclass(frozen=True)
class RobotState:
    """Planar pose and velocity of the robot.

    ``theta`` is normalised into (-pi, pi] on construction.

    Example:
        >>> RobotState(1.0, 2.0, 2 * math.pi).theta
        0.0
    """

    x: float
    y: float
    theta: float
    v: float = 0.0
    omega: float = 0.0

    def __post_init__(self) -> None:
        """Validate and normalise the state."""
        for name in ("x", "y", "theta", "v", "omega"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ConfigurationError(f"{name} must be finite, got {value}")
        object.__setattr__(self, "theta", normalize_angle(self.theta))


class VelocityCommand(NamedTuple):
    """Linear and angular velocity held for one control period."""

    v: float
    omega: float


STOP = VelocityCommand(0.0, 0.0)


class PoseSample(NamedTuple):
    """Predicted pose ``t`` seconds into a rollout."""

    t: float
    x: float
    y: float
    theta: float


@dataclass(frozen=True)
class DiscObstacle:
    """A disc obstacle moving at constant velocity.

    Example:
        >>> DiscObstacle(1.0, 1.0, 0.5, vx=2.0).position_at(0.5)
        (2.0, 1.0)
    """

    x: float
    y: float
    radius: float
    vx: float = 0.0
    vy: float = 0.0

    def __post_init__(self) -> None:
        """Validate the disc."""
        if not math.isfinite(self.radius) or self.radius <= 0:
            raise ConfigurationError(f"radius must be positive, got {self.radius}")
        for name in ("x", "y", "vx", "vy"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ConfigurationError(f"{name} must be finite, got {value}")

    def position_at(self, t: float) -> tuple[float, float]:
        """Centre after ``t`` seconds of constant-velocity motion."""
        return (self.x + self.vx * t, self.y + self.vy * t)


@dataclass(frozen=True)
class DwaParams:
    """Local planner parameters.

    Attributes:
        lam: Weight of clearance against path alignment, in [0, 1].
        dt: Rollout step and control period in seconds.
        horizon: Rollout length in seconds.
        v_samples: Linear velocity samples across the window.
        omega_samples: Angular velocity samples across the window.
        goal_tolerance: Distance (m) at which the goal counts as reached.
            None means half a cell.
        heading_weight: Weight of the heading measure inside G_path.
        velocity_weight: Weight of the velocity measure inside G_path.
        clear_cap: Clearance (m) beyond which no extra score is earned.
        freeze: Predict obstacles as stationary instead of constant velocity.

    Example:
        >>> DwaParams(lam=1.5)
        Traceback (most recent call last):
        ...
        mmplanner.core.exceptions.ConfigurationError: lam must lie in [0, 1], got 1.5
    """

    lam: float = DEFAULT_LAMBDA
    dt: float = DEFAULT_DT
    horizon: float = DEFAULT_HORIZON
    v_samples: int = DEFAULT_V_SAMPLES
    omega_samples: int = DEFAULT_OMEGA_SAMPLES
    goal_tolerance: float | None = None
    heading_weight: float = DEFAULT_HEADING_WEIGHT
    velocity_weight: float = DEFAULT_VELOCITY_WEIGHT
    clear_cap: float = DEFAULT_CLEAR_CAP
    freeze: bool = False

    def __post_init__(self) -> None:
        """Validate configuration values."""
        if not 0.0 <= self.lam <= 1.0:
            raise ConfigurationError(f"lam must lie in [0, 1], got {self.lam}")
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ConfigurationError(f"dt must be positive, got {self.dt}")
        if not (math.isfinite(self.horizon) and self.horizon >= self.dt):
            raise ConfigurationError(
                f"horizon must be at least dt, got {self.horizon} < {self.dt}"
            )
        for name in ("v_samples", "omega_samples"):
            value = getattr(self, name)
            if value < 2:
                raise ConfigurationError(f"{name} must be at least 2, got {value}")
        if self.goal_tolerance is not None and not self.goal_tolerance > 0:
            raise ConfigurationError(
                f"goal_tolerance must be positive, got {self.goal_tolerance}"
            )
        for name in ("heading_weight", "velocity_weight"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise ConfigurationError(f"{name} must be non-negative, got {value}")
        if self.heading_weight + self.velocity_weight <= 0:
            raise ConfigurationError("heading_weight + velocity_weight must be > 0")
        if not (math.isfinite(self.clear_cap) and self.clear_cap > 0):
            raise ConfigurationError(
                f"clear_cap must be positive, got {self.clear_cap}"
            )

    @property
    def steps(self) -> int:
        """Number of poses in one rollout."""
        return max(1, round(self.horizon / self.dt))

    def resolved_goal_tolerance(self, cell_size: float) -> float:
        """Goal tolerance in meters for a grid of the given cell size."""
        if self.goal_tolerance is not None:
            return self.goal_tolerance
        return 0.5 * cell_size


@dataclass(frozen=True)
class TrajectoryRollout:
    """A scored candidate trajectory.

    Attributes:
        poses: Predicted poses at ``dt, 2*dt, ..., horizon``.
        command: The command that produced them.
        min_clearance: Smallest gap between footprint and any obstacle (m);
            infinite when there are no obstacles.
        score: Objective value, minus infinity when the rollout collides.
    """

    poses: tuple[PoseSample, ...]
    command: VelocityCommand
    min_clearance: float
    score: float

    @property
    def admissible(self) -> bool:
        """True when the rollout keeps a positive clearance."""
        return self.min_clearance > 0

    @property
    def final(self) -> PoseSample:
        """Last predicted pose."""
        return self.poses[-1]


def _window_bounds(
    state: RobotState, profile: RobotProfile, params: DwaParams
) -> tuple[tuple[float, float], tuple[float, float]]:
    v_lo = max(profile.v_min, state.v - profile.accel_v * params.dt)
    v_hi = min(profile.v_max, state.v + profile.accel_v * params.dt)
    if v_lo > v_hi:
        v_lo = v_hi = min(max(state.v, profile.v_min), profile.v_max)
    w_lo = max(-profile.omega_max, state.omega - profile.accel_omega * params.dt)
    w_hi = min(profile.omega_max, state.omega + profile.accel_omega * params.dt)
    if w_lo > w_hi:
        w_lo = w_hi = min(max(state.omega, -profile.omega_max), profile.omega_max)
    return (v_lo, v_hi), (w_lo, w_hi)


def sample_window(
    state: RobotState, profile: RobotProfile, params: DwaParams | None = None
) -> list[VelocityCommand]:
    """Uniform command grid over the dynamic window, v-major.

    Example:
        >>> profile = RobotProfile(v_max=1.0, accel_v=20.0, accel_omega=1.0)
        >>> params = DwaParams(v_samples=2, omega_samples=2)
        >>> window = sample_window(RobotState(0.0, 0.0, 0.0), profile, params)
        >>> [(round(c.v, 3), round(c.omega, 3)) for c in window]
        [(0.0, -0.1), (0.0, 0.1), (1.0, -0.1), (1.0, 0.1)]
    """
    params = params or DwaParams()
    (v_lo, v_hi), (w_lo, w_hi) = _window_bounds(state, profile, params)
    vs = np.linspace(v_lo, v_hi, params.v_samples)
    ws = np.linspace(w_lo, w_hi, params.omega_samples)
    return [VelocityCommand(float(v), float(w)) for v in vs for w in ws]


def _arcs(
    state: RobotState, commands: Sequence[VelocityCommand], times: FloatArray
) -> tuple[FloatArray, FloatArray, FloatArray]:
    """Closed-form unicycle poses for many commands at once.

    Returns x, y and theta arrays of shape (len(commands), len(times)).
    """
    v = np.array([c.v for c in commands], dtype=np.float64)[:, None]
    w = np.array([c.omega for c in commands], dtype=np.float64)[:, None]
    t = times[None, :]
    theta = state.theta + w * t
    turning = np.abs(w) > STRAIGHT_EPSILON
    radius = np.divide(v, w, out=np.zeros_like(v), where=turning)
    arc_x = radius * (np.sin(theta) - math.sin(state.theta))
    arc_y = -radius * (np.cos(theta) - math.cos(state.theta))
    line_x = v * t * math.cos(state.theta)
    line_y = v * t * math.sin(state.theta)
    x = state.x + np.where(turning, arc_x, line_x)
    y = state.y + np.where(turning, arc_y, line_y)
    return x, y, theta


def _times(params: DwaParams) -> FloatArray:
    return params.dt * np.arange(1, params.steps + 1, dtype=np.float64)


def rollout(
    state: RobotState, cmd: VelocityCommand, params: DwaParams | None = None
) -> tuple[PoseSample, ...]:
    """Integrate a constant command over the horizon.

    Poses are exact points of the circular arc (or straight line when
    omega is zero) at multiples of ``dt``.

    Example:
        >>> poses = rollout(RobotState(0.0, 0.0, 0.0), VelocityCommand(1.0, 0.0),
        ...                 DwaParams(dt=0.1, horizon=1.0))
        >>> len(poses), round(poses[-1].x, 9), round(poses[-1].y, 9)
        (10, 1.0, 0.0)
    """
    params = params or DwaParams()
    times = _times(params)
    x, y, theta = _arcs(state, [cmd], times)
    return tuple(
        PoseSample(float(t), float(px), float(py), normalize_angle(float(pt)))
        for t, px, py, pt in zip(times, x[0], y[0], theta[0], strict=True)
    )


def _clearances(
    x: FloatArray,
    y: FloatArray,
    times: FloatArray,
    obstacles: Sequence[DiscObstacle],
    profile: RobotProfile,
    params: DwaParams,
) -> FloatArray:
    """Minimum clearance per rollout row; +inf without obstacles."""
    if not obstacles:
        return np.full(x.shape[0], np.inf)
    ox = np.array([o.x for o in obstacles])[:, None]
    oy = np.array([o.y for o in obstacles])[:, None]
    radius = np.array([o.radius for o in obstacles])[:, None]
    if not params.freeze:
        ox = ox + np.array([o.vx for o in obstacles])[:, None] * times[None, :]
        oy = oy + np.array([o.vy for o in obstacles])[:, None] * times[None, :]
    # (rollouts, obstacles, poses)
    dist = np.hypot(x[:, None, :] - ox[None], y[:, None, :] - oy[None])
    gaps = dist - radius[None] - profile.footprint_radius
    return gaps.min(axis=(1, 2))


def clearance(
    poses: Sequence[PoseSample],
    obstacles: Sequence[DiscObstacle],
    profile: RobotProfile,
    params: DwaParams | None = None,
) -> float:
    """Smallest footprint-to-obstacle gap along a pose sequence.

    Example:
        >>> poses = [PoseSample(0.1, 0.0, 0.0, 0.0)]
        >>> round(clearance(poses, [DiscObstacle(2.0, 0.0, 0.5)], RobotProfile()), 6)
        1.25
    """
    params = params or DwaParams()
    if not obstacles or not poses:
        return math.inf
    x = np.array([[p.x for p in poses]])
    y = np.array([[p.y for p in poses]])
    times = np.array([p.t for p in poses])
    return float(_clearances(x, y, times, obstacles, profile, params)[0])


def heading_measure(pose: PoseSample, target: tuple[float, float]) -> float:
    """1 when the pose faces the target, 0 when it faces away.

    Example:
        >>> heading_measure(PoseSample(0.0, 0.0, 0.0, 0.0), (1.0, 0.0))
        1.0
        >>> heading_measure(PoseSample(0.0, 0.0, 0.0, math.pi), (1.0, 0.0))
        0.0
    """
    dx, dy = target[0] - pose.x, target[1] - pose.y
    if dx == 0.0 and dy == 0.0:
        return 1.0
    error = normalize_angle(math.atan2(dy, dx) - pose.theta)
    return 1.0 - abs(error) / math.pi


def score(
    trajectory: TrajectoryRollout,
    target: tuple[float, float],
    obstacles: Sequence[DiscObstacle],
    profile: RobotProfile,
    params: DwaParams | None = None,
) -> float:
    """Objective value of a rollout.

    Args:
        trajectory: Rollout whose ``min_clearance`` is already computed.
        target: Active waypoint of the global path, in meters.
        obstacles: Obstacle set the clearance was computed against.
        profile: Robot limits (v_max normalises the velocity measure).
        params: Weights and clearance cap.

    Returns:
        A value in [0, 1], or minus infinity for a colliding rollout.
    """
    params = params or DwaParams()
    if trajectory.min_clearance <= 0:
        return -math.inf
    if obstacles:
        g_clear = min(trajectory.min_clearance, params.clear_cap) / params.clear_cap
    else:
        g_clear = 1.0
    g_head = heading_measure(trajectory.final, target)
    g_vel = max(trajectory.command.v, 0.0) / profile.v_max
    g_path = (params.heading_weight * g_head + params.velocity_weight * g_vel) / (
        params.heading_weight + params.velocity_weight
    )
    return params.lam * g_clear + (1.0 - params.lam) * g_path


def score_window(
    state: RobotState,
    target: tuple[float, float],
    obstacles: Sequence[DiscObstacle],
    profile: RobotProfile,
    params: DwaParams | None = None,
) -> list[TrajectoryRollout]:
    """Roll out and score every sampled command, in window order."""
    params = params or DwaParams()
    commands = sample_window(state, profile, params)
    times = _times(params)
    x, y, theta = _arcs(state, commands, times)
    gaps = _clearances(x, y, times, obstacles, profile, params)
    scored: list[TrajectoryRollout] = []
    for row, cmd in enumerate(commands):
        poses = tuple(
            PoseSample(float(t), float(px), float(py), normalize_angle(float(pt)))
            for t, px, py, pt in zip(times, x[row], y[row], theta[row], strict=True)
        )
        unscored = TrajectoryRollout(poses, cmd, float(gaps[row]), -math.inf)
        value = score(unscored, target, obstacles, profile, params)
        scored.append(
            TrajectoryRollout(poses, cmd, unscored.min_clearance, value)
        )
    return scored


def dwa_step(
    state: RobotState,
    target: tuple[float, float],
    obstacles: Sequence[DiscObstacle],
    profile: RobotProfile,
    params: DwaParams | None = None,
) -> tuple[VelocityCommand, TrajectoryRollout]:
    """Pick the best admissible command of the dynamic window.

    Ties on score go to the smaller |omega|, then the lower v index, then
    the lower omega index. When every rollout collides the stop command is
    returned together with its own rollout.

    Args:
        state: Current robot state.
        target: Active waypoint of the global path, in meters.
        obstacles: Scene overlay the robot must keep clear of.
        profile: Robot limits.
        params: Local planner parameters.
    """
    params = params or DwaParams()
    candidates = score_window(state, target, obstacles, profile, params)
    best: TrajectoryRollout | None = None
    best_key: tuple[float, float, int] | None = None
    for order, trajectory in enumerate(candidates):
        if not trajectory.admissible:
            continue
        key = (-trajectory.score, abs(trajectory.command.omega), order)
        if best_key is None or key < best_key:
            best, best_key = trajectory, key
    if best is not None:
        return best.command, best
    poses = rollout(state, STOP, params)
    stopped = TrajectoryRollout(
        poses, STOP, clearance(poses, obstacles, profile, params), -math.inf
    )
    return STOP, stopped
