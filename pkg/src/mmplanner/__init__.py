"""mmplanner - 2.5D height-grid planning with obstacle overcoming.

Quickstart
----------
1. Load a height map and describe the robot (core layer):

    from mmplanner import RobotProfile, load_map

    grid = load_map(open("fixtures/fig5/map.json", "rb").read())
    profile = RobotProfile(max_overcome_height=0.5)

2. Plan a global path (Abfs, Gbfs or the multimodal switching strategy):

    from mmplanner import CellIndex, Strategy, plan

    result = plan(grid, CellIndex(5, 8), CellIndex(5, 0), profile,
                  Strategy.MULTIMODAL)
    print(result.total_time, result.stats.nodes_expanded)

3. Simulate the robot tracking it with the dynamic-window planner:

    from mmplanner import track
    from mmplanner.adapters.files import read_scenario

    scenario, grid = read_scenario("fixtures/factory/scenario.json")
    log = track(grid, scenario)
    print(log.outcome, log.elapsed)

4. Capture structured logs (adapter layer):

    import logging
    from mmplanner import InMemoryLogStorage, StructuredLogHandler

    storage = InMemoryLogStorage()
    logging.getLogger("mmplanner").addHandler(StructuredLogHandler(storage))

The same operations are available on the command line: ``mmplanner plan``,
``simulate``, ``bench``, ``oracle`` and ``render``.
"""

from mmplanner.adapters.logging import StructuredLogHandler, install_handler
from mmplanner.adapters.logging_context import (
    clear_log_context,
    get_log_context,
    log_context,
    set_log_context,
    update_log_context,
)
from mmplanner.adapters.storage import (
    InMemoryLogStorage,
    InMemoryMetricsStorage,
    StreamLogSink,
)
from mmplanner.core.costmodel import (
    Metric,
    heuristic_time,
    overcoming_time,
    step_cost,
    switch_threshold,
)
from mmplanner.core.dwa import (
    DiscObstacle,
    DwaParams,
    RobotState,
    TrajectoryRollout,
    VelocityCommand,
    dwa_step,
    rollout,
    sample_window,
    score,
)
from mmplanner.core.encoding.bench_csv import (
    MetricsRow,
    decode_bench_csv,
    encode_bench_csv,
)
from mmplanner.core.encoding.documents import (
    load_log,
    load_plan,
    load_scenario,
    save_log,
    save_plan,
)
from mmplanner.core.encoding.ndjson import encode_log_line, encode_metrics
from mmplanner.core.encoding.svg import render_svg
from mmplanner.core.exceptions import (
    ConfigurationError,
    ContractViolation,
    InputDomainError,
    InternalConsistencyError,
    MapFormatError,
    PlannerError,
)
from mmplanner.core.gridmap import (
    HeightGrid,
    classify_transition,
    load_map,
    neighbors,
    save_map,
)
from mmplanner.core.logs import (
    TimedLogResult,
    get_logger,
    log,
    log_exception,
    timed_log,
)
from mmplanner.core.metrics import TimerResult, counter, gauge, timer
from mmplanner.core.models import (
    CellIndex,
    EdgeCost,
    LogEntry,
    MetricSample,
    MoveKind,
    RobotProfile,
    TraversalClass,
)
from mmplanner.core.planner import (
    NoPath,
    PlannerConfig,
    PlanResult,
    SearchStats,
    Strategy,
    check_transitions,
    oracle_plan,
    plan,
)
from mmplanner.core.ports import LogSinkPort, MetricsSinkPort
from mmplanner.core.scenario import (
    DynamicObstacle,
    EventKind,
    ExecutionLog,
    Scenario,
    TrackingConfig,
)
from mmplanner.runtime import (
    BenchRunner,
    VerifyReport,
    build_obstacle_overlay,
    compare_baseline,
    mask_obstacles,
    replan_check,
    run_bench,
    run_verify,
    track,
)

__all__ = [
    # Models
    "CellIndex",
    "EdgeCost",
    "LogEntry",
    "MetricSample",
    "MoveKind",
    "RobotProfile",
    "TraversalClass",
    # Grid map
    "HeightGrid",
    "classify_transition",
    "load_map",
    "neighbors",
    "save_map",
    # Cost model
    "Metric",
    "heuristic_time",
    "overcoming_time",
    "step_cost",
    "switch_threshold",
    # Planning
    "NoPath",
    "PlannerConfig",
    "PlanResult",
    "SearchStats",
    "Strategy",
    "check_transitions",
    "oracle_plan",
    "plan",
    # Local planner
    "DiscObstacle",
    "DwaParams",
    "RobotState",
    "TrajectoryRollout",
    "VelocityCommand",
    "dwa_step",
    "rollout",
    "sample_window",
    "score",
    # Execution
    "DynamicObstacle",
    "EventKind",
    "ExecutionLog",
    "Scenario",
    "TrackingConfig",
    "build_obstacle_overlay",
    "mask_obstacles",
    "replan_check",
    "track",
    # Benchmarking
    "BenchRunner",
    "MetricsRow",
    "VerifyReport",
    "compare_baseline",
    "run_bench",
    "run_verify",
    # Encoding
    "decode_bench_csv",
    "encode_bench_csv",
    "encode_log_line",
    "encode_metrics",
    "load_log",
    "load_plan",
    "load_scenario",
    "render_svg",
    "save_log",
    "save_plan",
    # Log helpers
    "get_logger",
    "log",
    "log_exception",
    "timed_log",
    "TimedLogResult",
    # Metric helpers
    "counter",
    "gauge",
    "timer",
    "TimerResult",
    # Ports
    "LogSinkPort",
    "MetricsSinkPort",
    # Exceptions
    "ConfigurationError",
    "ContractViolation",
    "InputDomainError",
    "InternalConsistencyError",
    "MapFormatError",
    "PlannerError",
    # Storage
    "InMemoryLogStorage",
    "InMemoryMetricsStorage",
    "StreamLogSink",
    # Logging integration
    "StructuredLogHandler",
    "install_handler",
    # Logging context helpers
    "clear_log_context",
    "get_log_context",
    "log_context",
    "set_log_context",
    "update_log_context",
]
