"""Benchmark and oracle cross-check runners."""

import math
import time
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from mmplanner.adapters.files import discover_suite, read_scenario, scenario_id_for
from mmplanner.adapters.logging_context import log_context
from mmplanner.core.encoding.bench_csv import (
    OUTCOME_NO_PATH,
    OUTCOME_OK,
    MetricsRow,
    with_relative,
)
from mmplanner.core.gridmap import HeightGrid
from mmplanner.core.logs import get_logger, timed_log
from mmplanner.core.metrics import counter, gauge
from mmplanner.core.models import CellIndex, RobotProfile
from mmplanner.core.planner.oracle import ORACLE_LABEL, oracle_plan
from mmplanner.core.planner.results import NoPath, PlanResult, Strategy
from mmplanner.core.planner.search import check_transitions, plan
from mmplanner.core.ports import MetricsSinkPort
from mmplanner.core.scenario import Scenario

_logger = get_logger(__name__)

OUTCOME_DELTA = "delta"

# Strategies whose cost must match the oracle.
VERIFIED_STRATEGIES = (Strategy.ABFS, Strategy.MULTIMODAL)

DEFAULT_STRATEGIES = (Strategy.ABFS, Strategy.GBFS, Strategy.MULTIMODAL)

# Absolute tolerance for cost equality, in seconds.
COST_TOLERANCE = 1e-9

# Height levels of random verification maps: flat, ramp noise, climbable
# steps and walls.
RANDOM_LEVELS = (0.0, 0.03, 0.2, 0.4, 3.0)
RANDOM_WEIGHTS = (0.55, 0.1, 0.15, 0.1, 0.1)


def _cost(result: PlanResult | NoPath) -> float | None:
    return result.total_time if isinstance(result, PlanResult) else None


def _agrees(a: float | None, b: float | None) -> bool:
    if a is None or b is None:
        return a is None and b is None
    return abs(a - b) <= COST_TOLERANCE


@dataclass(frozen=True)
class VerifyReport:
    """Cost comparison of the planners against the uniform-cost oracle.

    Attributes:
        scenario_id: Scenario the report belongs to.
        costs: Total time per planner label; None records a NoPath.
        transitions_ok: Per planner label, whether the path avoids Blocked
            steps. Planners that found no path are left out.
    """

    scenario_id: str
    costs: dict[str, float | None]
    transitions_ok: dict[str, bool] = field(default_factory=dict)

    def delta(self, label: str) -> float | None:
        """Cost minus oracle cost; None when either side found no path."""
        cost, best = self.costs.get(label), self.costs.get(ORACLE_LABEL)
        if cost is None or best is None:
            return None
        return cost - best

    def agrees(self, label: str) -> bool:
        """True if the planner matches the oracle, NoPath included."""
        return _agrees(self.costs.get(label), self.costs.get(ORACLE_LABEL))

    @property
    def abfs_ok(self) -> bool:
        return self.agrees(Strategy.ABFS) and all(self.transitions_ok.values())

    @property
    def multimodal_ok(self) -> bool:
        return self.agrees(Strategy.MULTIMODAL)

    def passed(self, strict: bool = False, *, curated: bool = False) -> bool:
        """Abfs must always agree.

        Multimodal must agree on curated scenarios, and on random maps only
        under ``strict``.
        """
        return self.abfs_ok and (self.multimodal_ok or not (strict or curated))


def run_verify(
    grid: HeightGrid,
    scenario: Scenario,
    *,
    time_func: Callable[[], float] = time.perf_counter,
) -> VerifyReport:
    """Run Abfs, Multimodal and the oracle on one task and compare costs.

    Example:
        >>> grid = HeightGrid.from_rows([[0.0] * 5] * 5)
        >>> scenario = Scenario("flat", "map.json", CellIndex(0, 0), CellIndex(4, 2))
        >>> report = run_verify(grid, scenario)
        >>> report.passed(strict=True), round(report.delta("multimodal") or 0.0, 9)
        (True, 0.0)
    """
    costs: dict[str, float | None] = {}
    transitions: dict[str, bool] = {}
    for strategy in VERIFIED_STRATEGIES:
        result = plan(
            grid,
            scenario.start,
            scenario.goal,
            scenario.profile,
            strategy,
            scenario.metric,
            config=scenario.planner,
            time_func=time_func,
        )
        costs[strategy] = _cost(result)
        if isinstance(result, PlanResult):
            transitions[strategy] = check_transitions(grid, result, scenario.profile)
    costs[ORACLE_LABEL] = _cost(
        oracle_plan(
            grid, scenario.start, scenario.goal, scenario.profile, time_func=time_func
        )
    )
    report = VerifyReport(scenario.scenario_id, costs, transitions)
    log = _logger.with_fields(
        scenario_id=scenario.scenario_id,
        abfs_ok=report.abfs_ok,
        multimodal_ok=report.multimodal_ok,
    )
    if report.passed(strict=True):
        log.debug("verify finished")
    else:
        log.warn("verify found a cost delta")
    return report


def random_grid(rng: np.random.Generator, size: int = 15) -> HeightGrid:
    """A random square map mixing Direct, Overcome and Blocked steps.

    Example:
        >>> grid = random_grid(np.random.default_rng(7), size=4)
        >>> (grid.width, grid.height)
        (4, 4)
    """
    heights = rng.choice(RANDOM_LEVELS, size=size * size, p=RANDOM_WEIGHTS)
    return HeightGrid(size, size, 1.0, tuple(float(h) for h in heights))


def verify_random(
    count: int,
    *,
    size: int = 15,
    seed: int = 0,
    profile: RobotProfile | None = None,
) -> list[VerifyReport]:
    """Cross-check the planners on seeded random maps.

    Start and goal are opposite corners, flattened so they are never walls.
    """
    rng = np.random.default_rng(seed)
    profile = profile or RobotProfile()
    reports = []
    for index in range(count):
        grid = random_grid(rng, size)
        heights = list(grid.heights)
        start, goal = CellIndex(0, 0), CellIndex(size - 1, size - 1)
        heights[grid.index(start)] = heights[grid.index(goal)] = 0.0
        grid = HeightGrid(size, size, 1.0, tuple(heights))
        scenario = Scenario(
            f"random-{seed}-{index}", "", start, goal, profile=profile, seed=seed
        )
        reports.append(run_verify(grid, scenario))
    return reports


@dataclass(frozen=True)
class BenchResult:
    """Rows and verification reports of one suite run."""

    rows: list[MetricsRow]
    reports: list[VerifyReport] = field(default_factory=list)

    def passed(self, strict: bool = False, *, curated: bool = False) -> bool:
        return all(r.passed(strict, curated=curated) for r in self.reports)


class BenchRunner:
    """Runs every strategy on every scenario of a suite.

    A scenario that fails to load or crashes a planner yields rows with an
    ``error: ...`` outcome; the rest of the suite still runs. Rows come out
    sorted by scenario id and strategy.

    Example:
        >>> from mmplanner import InMemoryMetricsStorage
        >>> runner = BenchRunner(metrics_sink=InMemoryMetricsStorage())
        >>> [str(s) for s in runner.strategies]
        ['abfs', 'gbfs', 'multimodal']
    """

    def __init__(
        self,
        strategies: Sequence[Strategy] = DEFAULT_STRATEGIES,
        metrics_sink: MetricsSinkPort | None = None,
        *,
        verify: bool = True,
        time_func: Callable[[], float] = time.perf_counter,
    ) -> None:
        """Initialize the runner.

        Args:
            strategies: Strategies to run on each scenario.
            metrics_sink: Receives per-run metric samples. None skips them.
            verify: Also run the oracle and mark cost deltas.
            time_func: Clock for wall-clock measurements.
        """
        self.strategies = tuple(strategies)
        self._metrics = metrics_sink
        self._verify = verify
        self._time_func = time_func

    def run(self, suite: str | Path) -> BenchResult:
        """Run the whole suite directory."""
        rows: list[MetricsRow] = []
        reports: list[VerifyReport] = []
        paths = discover_suite(suite)
        with timed_log(
            "bench suite",
            logger=_logger,
            time_func=self._time_func,
            suite=str(suite),
            scenarios=len(paths),
        ):
            for path in paths:
                scenario_rows, report = self.run_file(path)
                rows.extend(scenario_rows)
                if report is not None:
                    reports.append(report)
        _logger.with_fields(scenarios=len(reports), rows=len(rows)).info(
            "bench finished"
        )
        return BenchResult(with_relative(rows), reports)

    def run_file(self, path: Path) -> tuple[list[MetricsRow], VerifyReport | None]:
        """Run one scenario file, turning any failure into error rows."""
        scenario_id = scenario_id_for(path)
        with log_context(scenario_id=scenario_id):
            try:
                scenario, grid = read_scenario(path)
                return self.run_scenario(grid, scenario)
            except Exception as e:
                _logger.with_fields(path=str(path)).exception("bench scenario failed")
                outcome = f"error: {e}"
                rows = [
                    MetricsRow(scenario_id, str(s), outcome=outcome)
                    for s in self.strategies
                ]
                return rows, None

    def run_scenario(
        self, grid: HeightGrid, scenario: Scenario
    ) -> tuple[list[MetricsRow], VerifyReport | None]:
        """Run every strategy on a loaded scenario."""
        report = (
            run_verify(grid, scenario, time_func=self._time_func)
            if self._verify
            else None
        )
        rows = []
        for strategy in self.strategies:
            with log_context(strategy=str(strategy)):
                rows.append(self._row(grid, scenario, strategy, report))
        return rows, report

    def _row(
        self,
        grid: HeightGrid,
        scenario: Scenario,
        strategy: Strategy,
        report: VerifyReport | None,
    ) -> MetricsRow:
        result = plan(
            grid,
            scenario.start,
            scenario.goal,
            scenario.profile,
            strategy,
            scenario.metric,
            config=scenario.planner,
            time_func=self._time_func,
        )
        stats = result.stats
        if isinstance(result, NoPath):
            outcome = OUTCOME_NO_PATH
        elif (
            report is not None
            and strategy in VERIFIED_STRATEGIES
            and not report.agrees(strategy)
        ):
            outcome = OUTCOME_DELTA
        else:
            outcome = OUTCOME_OK
        row = MetricsRow(
            scenario_id=scenario.scenario_id,
            strategy=str(strategy),
            nodes_expanded=stats.nodes_expanded,
            nodes_generated=stats.nodes_generated,
            path_steps=result.path_steps if isinstance(result, PlanResult) else 0,
            total_time_s=(
                result.total_time if isinstance(result, PlanResult) else math.nan
            ),
            wall_clock_s=stats.wall_clock,
            outcome=outcome,
            seed=scenario.seed,
        )
        self._emit(row)
        _logger.with_fields(
            nodes_expanded=row.nodes_expanded, outcome=row.outcome
        ).info("bench run finished")
        return row

    def _emit(self, row: MetricsRow) -> None:
        if self._metrics is None:
            return
        labels = {"scenario_id": row.scenario_id, "strategy": row.strategy}
        self._metrics.write(
            counter("plan_nodes_expanded", row.nodes_expanded, labels=labels)
        )
        self._metrics.write(
            gauge("plan_wall_clock_seconds", row.wall_clock_s, labels=labels)
        )
        if row.outcome != OUTCOME_NO_PATH and not math.isnan(row.total_time_s):
            self._metrics.write(
                gauge("plan_total_time_seconds", row.total_time_s, labels=labels)
            )


def run_bench(
    suite: str | Path,
    strategies: Sequence[Strategy] = DEFAULT_STRATEGIES,
    metrics_sink: MetricsSinkPort | None = None,
) -> BenchResult:
    """Run a suite with the default runner settings."""
    return BenchRunner(strategies, metrics_sink).run(suite)


def compare_baseline(
    baseline: Sequence[MetricsRow], rows: Sequence[MetricsRow]
) -> list[str]:
    """Differences between a saved bench table and a fresh run.

    Searches are deterministic, so expansions, path length, cost and
    outcome must repeat exactly; wall clock and the ratios derived from it
    are not compared. Pairs present on only one side are reported too.

    Example:
        >>> old = [MetricsRow("fig5", "abfs", nodes_expanded=40, total_time_s=9.0)]
        >>> new = [MetricsRow("fig5", "abfs", nodes_expanded=41, total_time_s=9.0)]
        >>> compare_baseline(old, new)
        ['fig5/abfs: nodes_expanded 40 != 41']
    """
    before = {r.sort_key: r for r in baseline}
    after = {r.sort_key: r for r in rows}
    problems = []
    for key in sorted(before.keys() | after.keys()):
        label = "/".join(key)
        old, new = before.get(key), after.get(key)
        if old is None:
            problems.append(f"{label}: missing from baseline")
            continue
        if new is None:
            problems.append(f"{label}: missing from this run")
            continue
        for name in ("nodes_expanded", "nodes_generated", "path_steps", "outcome"):
            a, b = getattr(old, name), getattr(new, name)
            if a != b:
                problems.append(f"{label}: {name} {a} != {b}")
        a, b = old.total_time_s, new.total_time_s
        same = (math.isnan(a) and math.isnan(b)) or abs(a - b) <= COST_TOLERANCE
        if not same:
            problems.append(f"{label}: total_time_s {a!r} != {b!r}")
    return problems
