"""JSON codecs for scenario, plan and execution-log documents.

Every loader validates field by field and raises MapFormatError naming the
offending field. Savers emit keys in a fixed order so identical inputs give
byte-identical files. Non-finite clearances are written as ``null``.
"""

import dataclasses
import json
import math
import types
from typing import Any, get_args

from mmplanner.core.costmodel import Metric
from mmplanner.core.dwa import DwaParams
from mmplanner.core.encoding.fields import (
    as_cell,
    as_int,
    as_list,
    as_number,
    as_object,
    as_point,
    parse_document,
    require,
)
from mmplanner.core.exceptions import ConfigurationError, MapFormatError
from mmplanner.core.models import MoveKind, RobotProfile, TraversalClass
from mmplanner.core.planner.results import (
    NoPath,
    PathStep,
    PlannerConfig,
    PlanResult,
    SearchStats,
    StepMode,
    Strategy,
)
from mmplanner.core.scenario import (
    DEFAULT_MAX_SIM_TIME,
    DEFAULT_SIM_DT,
    DynamicObstacle,
    EventKind,
    ExecutionEvent,
    ExecutionLog,
    Scenario,
    TrackingConfig,
)


def _coerce(value: Any, annotation: Any, name: str) -> Any:
    if isinstance(annotation, types.UnionType):
        if value is None:
            return None
        (inner,) = (a for a in get_args(annotation) if a is not type(None))
        return _coerce(value, inner, name)
    if annotation is bool:
        if not isinstance(value, bool):
            raise MapFormatError(name, f"expected true or false, got {value!r}")
        return value
    if annotation is int:
        return as_int(value, name)
    if annotation is float:
        return as_number(value, name)
    if annotation is Metric:
        return _metric(value, name)
    raise MapFormatError(name, f"unsupported field type {annotation!r}")


def _section[T](document: dict[str, Any], name: str, cls: type[T]) -> T:
    """Build a config dataclass from an optional object of overrides."""
    if name not in document:
        return cls()
    section = as_object(document[name], name)
    known = {f.name: f.type for f in dataclasses.fields(cls)}  # type: ignore[arg-type]
    values: dict[str, Any] = {}
    for key, value in section.items():
        if key not in known:
            raise MapFormatError(f"{name}.{key}", "unknown field")
        values[key] = _coerce(value, known[key], f"{name}.{key}")
    try:
        return cls(**values)
    except ConfigurationError as e:
        raise MapFormatError(name, str(e)) from e


def _metric(value: Any, name: str) -> Metric:
    try:
        return Metric(str(value).lower())
    except ValueError as e:
        raise MapFormatError(
            name, f"expected octile or manhattan, got {value!r}"
        ) from e


def _strategy(value: Any, name: str) -> Strategy:
    try:
        return Strategy.parse(str(value))
    except ConfigurationError as e:
        raise MapFormatError(name, str(e)) from e


def _obstacle(value: Any, name: str) -> DynamicObstacle:
    raw = as_object(value, name)
    loop = as_list(raw.get("waypoints", []), f"{name}.waypoints")
    waypoints = tuple(as_point(p, f"{name}.waypoints") for p in loop)
    try:
        return DynamicObstacle(
            position=as_point(require(raw, "position"), f"{name}.position"),
            radius=as_number(require(raw, "radius"), f"{name}.radius"),
            velocity=as_point(raw.get("velocity", [0.0, 0.0]), f"{name}.velocity"),
            waypoints=waypoints,
        )
    except ConfigurationError as e:
        raise MapFormatError(name, str(e)) from e


def load_scenario(data: bytes | str, default_id: str = "scenario") -> Scenario:
    """Parse a scenario document.

    Only ``map``, ``start`` and ``goal`` are mandatory; every other section
    overrides a subset of the defaults.

    Example:
        >>> doc = '{"map": "map.json", "start": [0, 0], "goal": [3, 1],'
        >>> doc += ' "profile": {"speed": 2.0}, "strategy": "astar"}'
        >>> scenario = load_scenario(doc, default_id="demo")
        >>> scenario.scenario_id, scenario.profile.speed, scenario.strategy
        ('demo', 2.0, <Strategy.ABFS: 'abfs'>)
        >>> load_scenario('{"map": "m.json", "start": [0], "goal": [1, 1]}')
        Traceback (most recent call last):
        ...
        mmplanner.core.exceptions.MapFormatError: start: expected [x, y], got [0]
    """
    document = parse_document(data, "scenario")
    map_ref = require(document, "map")
    if not isinstance(map_ref, str) or not map_ref:
        raise MapFormatError("map", f"expected a file path, got {map_ref!r}")
    scenario_id = document.get("id", default_id)
    if not isinstance(scenario_id, str):
        raise MapFormatError("id", f"expected a string, got {scenario_id!r}")
    unknown = as_list(document.get("unknown_obstacles", []), "unknown_obstacles")
    obstacles = tuple(
        _obstacle(item, f"unknown_obstacles[{i}]") for i, item in enumerate(unknown)
    )
    try:
        return Scenario(
            scenario_id=scenario_id,
            map_ref=map_ref,
            start=as_cell(require(document, "start"), "start"),
            goal=as_cell(require(document, "goal"), "goal"),
            profile=_section(document, "profile", RobotProfile),
            strategy=_strategy(document.get("strategy", "multimodal"), "strategy"),
            metric=_metric(document.get("metric", "octile"), "metric"),
            unknown_obstacles=obstacles,
            dwa=_section(document, "dwa", DwaParams),
            seed=as_int(document.get("seed", 0), "seed"),
            sim_dt=as_number(document.get("sim_dt_s", DEFAULT_SIM_DT), "sim_dt_s"),
            max_sim_time=as_number(
                document.get("max_sim_time_s", DEFAULT_MAX_SIM_TIME), "max_sim_time_s"
            ),
            tracking=_section(document, "tracking", TrackingConfig),
            planner=_section(document, "planner", PlannerConfig),
        )
    except ConfigurationError as e:
        raise MapFormatError("scenario", str(e)) from e


def _config_dict(config: Any) -> dict[str, Any]:
    document: dict[str, Any] = {}
    for f in dataclasses.fields(config):
        value = getattr(config, f.name)
        document[f.name] = str(value) if isinstance(value, Metric) else value
    return document


def default_config() -> dict[str, Any]:
    """Every configurable default, grouped as in the scenario file.

    Example:
        >>> default_config()["dwa"]["lam"]
        0.5
    """
    return {
        "profile": _config_dict(RobotProfile()),
        "dwa": _config_dict(DwaParams()),
        "tracking": _config_dict(TrackingConfig()),
        "planner": _config_dict(PlannerConfig()),
        "strategy": str(Strategy.MULTIMODAL),
        "metric": str(Metric.OCTILE),
        "sim_dt_s": DEFAULT_SIM_DT,
        "max_sim_time_s": DEFAULT_MAX_SIM_TIME,
    }


_STATS_FIELDS = (
    "nodes_expanded",
    "nodes_generated",
    "mode_switches",
    "jump_points",
    "nodes_followed",
)


def _stats_dict(stats: SearchStats, include_timing: bool) -> dict[str, Any]:
    document: dict[str, Any] = {name: getattr(stats, name) for name in _STATS_FIELDS}
    if include_timing:
        document["wall_clock_s"] = stats.wall_clock
    return document


def save_plan(result: PlanResult | NoPath, *, include_timing: bool = False) -> bytes:
    """Serialize a plan result.

    Found plans carry a top-level ``modes`` list, one traversal mode per
    step. Wall clock is left out unless ``include_timing`` is set, so
    repeated runs produce identical files.
    """
    if isinstance(result, NoPath):
        document: dict[str, Any] = {
            "found": False,
            "strategy": result.strategy,
            "start": list(result.start),
            "goal": list(result.goal),
            "reason": result.reason,
            "stats": _stats_dict(result.stats, include_timing),
        }
    else:
        document = {
            "found": True,
            "strategy": result.strategy,
            "metric": str(result.metric),
            "start": list(result.path[0]),
            "goal": list(result.path[-1]),
            "total_time_s": result.total_time,
            "path": [list(cell) for cell in result.path],
            "steps": [
                {
                    "cell": list(step.cell),
                    "kind": str(step.kind),
                    "traversal": str(step.traversal),
                    "mode": str(step.mode),
                    "cost_s": step.cost,
                }
                for step in result.steps
            ],
            "modes": [str(step.mode) for step in result.steps],
            "stats": _stats_dict(result.stats, include_timing),
            "searched": [list(cell) for cell in result.searched],
        }
    return (json.dumps(document, indent=2) + "\n").encode("utf-8")


def _stats(value: Any) -> SearchStats:
    raw = as_object(value, "stats")
    counts = {
        name: as_int(raw.get(name, 0), f"stats.{name}") for name in _STATS_FIELDS
    }
    wall_clock = as_number(raw.get("wall_clock_s", 0.0), "stats.wall_clock_s")
    return SearchStats(**counts, wall_clock=wall_clock)


def _enum[E: (MoveKind, TraversalClass, StepMode)](
    cls: type[E], value: Any, name: str
) -> E:
    try:
        return cls(value)
    except ValueError as e:
        raise MapFormatError(name, f"unknown value {value!r}") from e


def load_plan(data: bytes | str) -> PlanResult | NoPath:
    """Parse a plan document written by ``save_plan``.

    Example:
        >>> doc = b'{"found": false, "strategy": "abfs", "start": [0, 0],'
        >>> doc += b' "goal": [1, 0], "stats": {}}'
        >>> load_plan(doc).reason
        'open list exhausted'
    """
    document = parse_document(data, "plan")
    found = require(document, "found")
    strategy = require(document, "strategy")
    if not isinstance(strategy, str):
        raise MapFormatError("strategy", f"expected a string, got {strategy!r}")
    stats = _stats(document.get("stats", {}))
    if found is False:
        reason = document.get("reason", "open list exhausted")
        return NoPath(
            start=as_cell(require(document, "start"), "start"),
            goal=as_cell(require(document, "goal"), "goal"),
            strategy=strategy,
            stats=stats,
            reason=str(reason),
        )
    path = tuple(
        as_cell(cell, "path") for cell in as_list(require(document, "path"), "path")
    )
    if not path:
        raise MapFormatError("path", "must hold at least one cell")
    modes = [
        _enum(StepMode, value, f"modes[{i}]")
        for i, value in enumerate(as_list(document.get("modes", []), "modes"))
    ]
    if modes and len(modes) != len(path) - 1:
        raise MapFormatError(
            "modes", f"expected {len(path) - 1} modes, got {len(modes)}"
        )
    steps = []
    for i, raw in enumerate(as_list(require(document, "steps"), "steps")):
        name = f"steps[{i}]"
        item = as_object(raw, name)
        if "mode" in item or i >= len(modes):
            mode = _enum(StepMode, require(item, "mode"), f"{name}.mode")
        else:
            mode = modes[i]
        if i < len(modes) and mode is not modes[i]:
            raise MapFormatError(f"{name}.mode", f"disagrees with modes[{i}]")
        steps.append(
            PathStep(
                cell=as_cell(require(item, "cell"), f"{name}.cell"),
                kind=_enum(MoveKind, require(item, "kind"), f"{name}.kind"),
                traversal=_enum(
                    TraversalClass, require(item, "traversal"), f"{name}.traversal"
                ),
                mode=mode,
                cost=as_number(require(item, "cost_s"), f"{name}.cost_s"),
            )
        )
    if len(steps) != len(path) - 1:
        raise MapFormatError(
            "steps", f"expected {len(path) - 1} steps, got {len(steps)}"
        )
    return PlanResult(
        path=path,
        steps=tuple(steps),
        total_time=as_number(require(document, "total_time_s"), "total_time_s"),
        stats=stats,
        strategy=strategy,
        metric=_metric(document.get("metric", "octile"), "metric"),
        searched=tuple(
            as_cell(cell, "searched")
            for cell in as_list(document.get("searched", []), "searched")
        ),
    )


def _finite_or_none(value: float) -> float | None:
    return value if math.isfinite(value) else None


def save_log(log: ExecutionLog) -> bytes:
    """Serialize an execution log.

    Example:
        >>> samples = ((0.0, 0.5, 0.5, 0.0, 0.0, 0.0),)
        >>> events = (ExecutionEvent(0.0, EventKind.NO_PATH),)
        >>> log = ExecutionLog("demo", 0, samples, events, math.inf, 0.0)
        >>> load_log(save_log(log)) == log
        True
    """
    document = {
        "scenario_id": log.scenario_id,
        "seed": log.seed,
        "outcome": str(log.outcome) if log.outcome is not None else None,
        "elapsed_s": log.elapsed,
        "min_clearance_m": _finite_or_none(log.min_clearance),
        "max_cross_track_m": log.max_cross_track,
        "events": [
            {"t": event.t, "kind": str(event.kind), **event.detail}
            for event in log.events
        ],
        "trajectory": [list(sample) for sample in log.trajectory],
    }
    return (json.dumps(document) + "\n").encode("utf-8")


def load_log(data: bytes | str) -> ExecutionLog:
    """Parse an execution log written by ``save_log``."""
    document = parse_document(data, "log")
    trajectory = []
    for i, raw in enumerate(as_list(require(document, "trajectory"), "trajectory")):
        row = as_list(raw, f"trajectory[{i}]")
        if len(row) != 6:
            raise MapFormatError(
                f"trajectory[{i}]", "expected [t, x, y, theta, v, omega]"
            )
        t, x, y, theta, v, omega = (as_number(c, f"trajectory[{i}]") for c in row)
        trajectory.append((t, x, y, theta, v, omega))
    events = []
    for i, raw in enumerate(as_list(require(document, "events"), "events")):
        item = dict(as_object(raw, f"events[{i}]"))
        t = as_number(item.pop("t", None), f"events[{i}].t")
        try:
            kind = EventKind(item.pop("kind", None))
        except ValueError as e:
            raise MapFormatError(f"events[{i}].kind", "unknown event kind") from e
        events.append(ExecutionEvent(t, kind, item))
    clearance = document.get("min_clearance_m")
    scenario_id = require(document, "scenario_id")
    if not isinstance(scenario_id, str):
        raise MapFormatError("scenario_id", f"expected a string, got {scenario_id!r}")
    return ExecutionLog(
        scenario_id=scenario_id,
        seed=as_int(document.get("seed", 0), "seed"),
        trajectory=tuple(trajectory),
        events=tuple(events),
        min_clearance=math.inf
        if clearance is None
        else as_number(clearance, "min_clearance_m"),
        elapsed=as_number(require(document, "elapsed_s"), "elapsed_s"),
        max_cross_track=as_number(
            document.get("max_cross_track_m", 0.0), "max_cross_track_m"
        ),
    )

