"""Command-line front end.

Exit codes: 0 success, 1 input error, 2 no path, 3 verification failure.
"""

import argparse
import dataclasses
import json
import sys
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import NoReturn

from mmplanner.adapters.files import (
    read_bench_csv,
    read_log,
    read_map,
    read_plan,
    read_scenario,
    write_bytes,
)
from mmplanner.adapters.logging import install_handler, remove_handler, resolve_level
from mmplanner.adapters.logging_context import get_log_context, log_context
from mmplanner.adapters.storage import InMemoryMetricsStorage, StreamLogSink
from mmplanner.core.costmodel import Metric
from mmplanner.core.encoding.bench_csv import encode_bench_csv
from mmplanner.core.encoding.documents import default_config, save_log, save_plan
from mmplanner.core.encoding.ndjson import encode_metrics
from mmplanner.core.encoding.svg import render_svg
from mmplanner.core.exceptions import ConfigurationError, InputDomainError, PlannerError
from mmplanner.core.gridmap import HeightGrid
from mmplanner.core.logs import get_logger
from mmplanner.core.planner.results import NoPath, PlanResult, Strategy
from mmplanner.core.planner.search import plan
from mmplanner.core.scenario import EventKind, Scenario
from mmplanner.runtime.bench import (
    BenchRunner,
    VerifyReport,
    compare_baseline,
    run_verify,
    verify_random,
)
from mmplanner.runtime.mmp import track

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NO_PATH = 2
EXIT_VERIFY = 3

COMMANDS = ("plan", "simulate", "bench", "oracle", "render")
LOG_FORMATS = ("text", "json")

# Defaults for RunConfig
DEFAULT_LOG_LEVEL = "WARN"
DEFAULT_LOG_FORMAT = "text"
DEFAULT_RANDOM_SIZE = 15

_logger = get_logger(__name__)


@dataclass(frozen=True)
class RunConfig:
    """One validated command-line invocation.

    Input paths must exist; output paths are created on write.

    Example:
        >>> RunConfig(command="fly")
        Traceback (most recent call last):
        ...
        mmplanner.core.exceptions.ConfigurationError: command must be one of ...
    """

    command: str
    map_path: Path | None = None
    scenario_path: Path | None = None
    plan_path: Path | None = None
    log_path: Path | None = None
    suite: Path | None = None
    out: Path | None = None
    render: Path | None = None
    csv: Path | None = None
    metrics_out: Path | None = None
    baseline: Path | None = None
    strategy: Strategy | None = None
    metric: Metric | None = None
    footprint: bool = False
    planar: bool = False
    no_dwa: bool = False
    strict: bool = False
    random: int = 0
    size: int = DEFAULT_RANDOM_SIZE
    seed: int = 0
    log_level: str = DEFAULT_LOG_LEVEL
    log_format: str = DEFAULT_LOG_FORMAT

    def __post_init__(self) -> None:
        """Validate the command, flags and input paths."""
        if self.command not in COMMANDS:
            raise ConfigurationError(
                f"command must be one of {', '.join(COMMANDS)}, got {self.command!r}"
            )
        if self.log_format not in LOG_FORMATS:
            raise ConfigurationError(
                f"log format must be text or json, got {self.log_format!r}"
            )
        resolve_level(self.log_level)
        if self.random < 0 or self.size < 2:
            raise ConfigurationError(
                f"random maps need count >= 0 and size >= 2, got {self.random}, "
                f"{self.size}"
            )
        for name in ("map_path", "scenario_path", "plan_path", "log_path", "baseline"):
            path = getattr(self, name)
            if path is not None and not path.is_file():
                raise InputDomainError(f"file not found: {path}")
        if self.suite is not None and not self.suite.is_dir():
            raise InputDomainError(f"suite directory not found: {self.suite}")

    @classmethod
    def from_namespace(cls, ns: argparse.Namespace) -> "RunConfig":
        """Build a config from parsed arguments, ignoring unknown names."""
        names = {f.name for f in dataclasses.fields(cls)}
        values = {k: v for k, v in vars(ns).items() if k in names and v is not None}
        return cls(**values)

    def require(self, name: str) -> Path:
        """Return a path argument the command cannot do without."""
        value = getattr(self, name)
        if value is None:
            flag = "--" + name.removesuffix("_path").replace("_", "-")
            raise InputDomainError(f"{self.command} needs {flag}")
        return Path(value)


class _ArgumentParser(argparse.ArgumentParser):
    """Reports usage errors with the input-error exit code."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _strategy(name: str) -> Strategy:
    try:
        return Strategy.parse(name)
    except ConfigurationError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def build_parser() -> argparse.ArgumentParser:
    """The ``mmplanner`` argument parser."""
    parser = _ArgumentParser(
        prog="mmplanner",
        description="2.5D height-grid planning, tracking simulation and benchmarks.",
    )
    parser.add_argument("--log-level", default=DEFAULT_LOG_LEVEL)
    parser.add_argument("--log-format", choices=LOG_FORMATS, default=DEFAULT_LOG_FORMAT)
    parser.add_argument(
        "--show-config",
        action="store_true",
        help="print every configurable default as JSON and exit",
    )
    commands = parser.add_subparsers(dest="command", parser_class=_ArgumentParser)

    planning = commands.add_parser("plan", help="plan a global path")
    planning.add_argument("--map", dest="map_path", type=Path)
    planning.add_argument("--scenario", dest="scenario_path", type=Path)
    planning.add_argument(
        "--strategy", type=_strategy, help="astar|abfs, greedy|gbfs or multimodal"
    )
    planning.add_argument("--metric", type=Metric, choices=list(Metric))
    planning.add_argument("--out", type=Path)
    planning.add_argument("--render", type=Path, help="also write an SVG")
    planning.add_argument(
        "--footprint", action="store_true", help="tint searched cells in the SVG"
    )
    planning.add_argument(
        "--planar", action="store_true", help="treat every climbable step as a wall"
    )

    simulate = commands.add_parser("simulate", help="run the closed-loop simulation")
    simulate.add_argument("--scenario", dest="scenario_path", type=Path)
    simulate.add_argument("--map", dest="map_path", type=Path)
    simulate.add_argument("--out", type=Path)
    simulate.add_argument("--no-dwa", action="store_true")
    simulate.add_argument("--render", type=Path)

    bench = commands.add_parser("bench", help="benchmark every strategy on a suite")
    bench.add_argument("--suite", type=Path)
    bench.add_argument("--csv", type=Path)
    bench.add_argument("--metrics-out", type=Path, help="write NDJSON metric samples")
    bench.add_argument(
        "--baseline", type=Path, help="fail unless results repeat this bench CSV"
    )
    bench.add_argument(
        "--strict",
        action="store_true",
        help="accepted for symmetry with oracle; suite deltas always fail",
    )

    oracle = commands.add_parser("oracle", help="cross-check planners and oracle")
    oracle.add_argument("--map", dest="map_path", type=Path)
    oracle.add_argument("--scenario", dest="scenario_path", type=Path)
    oracle.add_argument("--strict", action="store_true")
    oracle.add_argument(
        "--random", type=int, help="check this many seeded random maps instead"
    )
    oracle.add_argument("--size", type=int)
    oracle.add_argument("--seed", type=int)

    render = commands.add_parser("render", help="draw a map with overlays as SVG")
    render.add_argument("--map", dest="map_path", type=Path)
    render.add_argument("--plan", dest="plan_path", type=Path)
    render.add_argument("--log", dest="log_path", type=Path)
    render.add_argument("--footprint", action="store_true")
    render.add_argument("--out", type=Path)
    return parser


def _print(line: str) -> None:
    sys.stdout.write(line + "\n")


def _load(config: RunConfig) -> tuple[Scenario, HeightGrid]:
    return read_scenario(config.require("scenario_path"), config.map_path)


def _plan(config: RunConfig) -> int:
    scenario, grid = _load(config)
    profile = scenario.profile
    if config.planar:
        profile = dataclasses.replace(profile, overcome_enabled=False)
    strategy = config.strategy or scenario.strategy
    result = plan(
        grid,
        scenario.start,
        scenario.goal,
        profile,
        strategy,
        config.metric or scenario.metric,
        config=scenario.planner,
    )
    if config.out is not None:
        write_bytes(config.out, save_plan(result))
    if isinstance(result, NoPath):
        _print(f"{strategy}: no path ({result.reason})")
        return EXIT_NO_PATH
    if config.render is not None:
        searched = result.searched if config.footprint else None
        write_bytes(config.render, render_svg(grid, plan=result, searched=searched))
    _print(
        f"{strategy}: total_time_s={result.total_time:.6f} "
        f"path_steps={result.path_steps} overcome_steps={result.overcome_steps} "
        f"nodes_expanded={result.stats.nodes_expanded}"
    )
    return EXIT_OK


def _simulate(config: RunConfig) -> int:
    scenario, grid = _load(config)
    use_dwa = False if config.no_dwa else None
    log = track(grid, scenario, use_dwa=use_dwa)
    if config.out is not None:
        write_bytes(config.out, save_log(log))
    if config.render is not None:
        obstacles = [ob.disc_at(0.0) for ob in scenario.unknown_obstacles]
        write_bytes(config.render, render_svg(grid, log=log, obstacles=obstacles))
    _print(
        f"{scenario.scenario_id}: outcome={log.outcome} elapsed_s={log.elapsed:.3f} "
        f"min_clearance_m={log.min_clearance:.3f}"
    )
    return EXIT_NO_PATH if log.outcome is EventKind.NO_PATH else EXIT_OK


def _bench(config: RunConfig) -> int:
    metrics = InMemoryMetricsStorage() if config.metrics_out is not None else None
    result = BenchRunner(metrics_sink=metrics).run(config.require("suite"))
    text = encode_bench_csv(result.rows)
    if config.csv is not None:
        write_bytes(config.csv, text.encode("utf-8"))
    else:
        sys.stdout.write(text)
    if metrics is not None and config.metrics_out is not None:
        write_bytes(config.metrics_out, encode_metrics(metrics.read()).encode())
    for report in result.reports:
        if not report.passed(curated=True):
            _print(f"verification failed: {_describe(report)}")
    changed: list[str] = []
    if config.baseline is not None:
        changed = compare_baseline(read_bench_csv(config.baseline), result.rows)
        for line in changed:
            _print(f"baseline mismatch: {line}")
    if changed or not result.passed(curated=True):
        return EXIT_VERIFY
    return EXIT_OK


def _describe(report: VerifyReport) -> str:
    costs = {k: (None if v is None else round(v, 9)) for k, v in report.costs.items()}
    return json.dumps(
        {
            "scenario_id": report.scenario_id,
            "costs": costs,
            "abfs_ok": report.abfs_ok,
            "multimodal_ok": report.multimodal_ok,
        },
        sort_keys=True,
    )


def _oracle(config: RunConfig) -> int:
    curated = config.random <= 0
    if curated:
        scenario, grid = _load(config)
        reports = [run_verify(grid, scenario)]
    else:
        reports = verify_random(config.random, size=config.size, seed=config.seed)
    for report in reports:
        _print(_describe(report))
    if all(r.passed(config.strict, curated=curated) for r in reports):
        return EXIT_OK
    return EXIT_VERIFY


def _render(config: RunConfig) -> int:
    grid = read_map(config.require("map_path"))
    result = read_plan(config.plan_path) if config.plan_path is not None else None
    found = result if isinstance(result, PlanResult) else None
    log = read_log(config.log_path) if config.log_path is not None else None
    searched = found.searched if found is not None and config.footprint else None
    svg = render_svg(grid, plan=found, log=log, searched=searched)
    write_bytes(config.require("out"), svg)
    return EXIT_OK


_HANDLERS = {
    "plan": _plan,
    "simulate": _simulate,
    "bench": _bench,
    "oracle": _oracle,
    "render": _render,
}


def run(config: RunConfig) -> int:
    """Execute a validated invocation and return its exit code."""
    with log_context(command=config.command):
        return _HANDLERS[config.command](config)


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point of the ``mmplanner`` script."""
    parser = build_parser()
    ns = parser.parse_args(argv)
    if ns.show_config:
        _print(json.dumps(default_config(), indent=2, sort_keys=True))
        return EXIT_OK
    if ns.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_INPUT
    try:
        sink = StreamLogSink(sys.stderr, fmt=ns.log_format)
        handler = install_handler(
            sink, level=ns.log_level, context_provider=get_log_context
        )
    except ConfigurationError as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_INPUT
    try:
        return run(RunConfig.from_namespace(ns))
    except (PlannerError, OSError) as e:
        _logger.with_fields(error_type=type(e).__name__).error(str(e))
        sys.stderr.write(f"error: {e}\n")
        return EXIT_INPUT
    finally:
        remove_handler(handler)
