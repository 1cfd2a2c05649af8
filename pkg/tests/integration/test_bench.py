"""Integration tests for the benchmark runner and oracle cross-check."""

import math
import shutil
from pathlib import Path

import pytest

from mmplanner.adapters.files import write_bytes
from mmplanner.adapters.storage import InMemoryLogStorage, InMemoryMetricsStorage
from mmplanner.core.encoding.bench_csv import (
    OUTCOME_NO_PATH,
    OUTCOME_OK,
    MetricsRow,
)
from mmplanner.core.exceptions import InputDomainError
from mmplanner.core.gridmap import HeightGrid, save_map
from mmplanner.core.models import CellIndex
from mmplanner.core.planner import Strategy
from mmplanner.core.scenario import Scenario
from mmplanner.runtime.bench import (
    BenchResult,
    BenchRunner,
    compare_baseline,
    run_bench,
    run_verify,
    verify_random,
)

pytestmark = pytest.mark.integration

FIXTURES_DIR = Path(__file__).resolve().parents[2] / "fixtures"
FIXTURE_COUNT = 8


@pytest.fixture(scope="module")
def curated() -> BenchResult:
    """One bench run over the curated suite, shared by the module."""
    return run_bench(FIXTURES_DIR)


class TestCuratedSuite:
    """Tests for a full run over the curated fixtures."""

    @pytest.mark.tra("Harness.Bench.CuratedSuite")
    def test_every_fixture_and_strategy_has_a_row(self, curated: BenchResult) -> None:
        """Eight fixtures times three strategies, sorted."""
        assert len(curated.rows) == FIXTURE_COUNT * 3
        assert len({r.scenario_id for r in curated.rows}) == FIXTURE_COUNT
        keys = [r.sort_key for r in curated.rows]
        assert keys == sorted(keys)

    def test_all_runs_match_the_oracle(self, curated: BenchResult) -> None:
        """No curated run errors, misses its path or shows a cost delta."""
        assert {r.outcome for r in curated.rows} == {OUTCOME_OK}
        assert len(curated.reports) == FIXTURE_COUNT
        assert curated.passed(strict=True)

    def test_abfs_is_the_baseline(self, curated: BenchResult) -> None:
        """Abfs rows have a unit expansion ratio."""
        abfs = [r for r in curated.rows if r.strategy == Strategy.ABFS]
        assert [r.expansion_ratio for r in abfs] == [1.0] * FIXTURE_COUNT

    def test_factory_expansion_order(self, curated: BenchResult) -> None:
        """On the factory hall Gbfs < Multimodal < Abfs in expanded cells."""
        expanded = {
            r.strategy: r.nodes_expanded
            for r in curated.rows
            if r.scenario_id == "factory"
        }
        assert (
            expanded[Strategy.GBFS]
            < expanded[Strategy.MULTIMODAL]
            < expanded[Strategy.ABFS]
        )

    def test_greedy_never_beats_abfs_cost(self, curated: BenchResult) -> None:
        """Gbfs may be slower to execute, never faster than optimal."""
        by_key = {r.sort_key: r for r in curated.rows}
        for scenario_id, strategy in by_key:
            if strategy == Strategy.GBFS:
                abfs = by_key[(scenario_id, str(Strategy.ABFS))]
                greedy = by_key[(scenario_id, strategy)]
                assert greedy.total_time_s >= abfs.total_time_s - 1e-9


class TestBenchRunner:
    """Tests for runner options, metrics and failure isolation."""

    def test_metric_samples_per_run(
        self, metrics_storage: InMemoryMetricsStorage
    ) -> None:
        """Each run writes its expansions, wall clock and plan time."""
        runner = BenchRunner(metrics_sink=metrics_storage, verify=False)
        result = runner.run(FIXTURES_DIR)
        assert not result.reports
        expanded = metrics_storage.read("plan_nodes_expanded")
        assert len(expanded) == FIXTURE_COUNT * 3
        assert len(metrics_storage.read("plan_wall_clock_seconds")) == len(expanded)
        assert len(metrics_storage.read("plan_total_time_seconds")) == len(expanded)
        assert {s.labels["strategy"] for s in expanded} == {
            "abfs",
            "gbfs",
            "multimodal",
        }

    def test_broken_scenario_is_isolated(
        self, tmp_path: Path, log_storage: InMemoryLogStorage
    ) -> None:
        """A malformed scenario produces error rows; the rest still runs."""
        shutil.copytree(FIXTURES_DIR / "fig5", tmp_path / "fig5")
        write_bytes(tmp_path / "broken.scenario.json", b'{"map": "missing.json"}')
        result = BenchRunner([Strategy.ABFS]).run(tmp_path)
        outcomes = {r.scenario_id: r.outcome for r in result.rows}
        assert outcomes["fig5"] == OUTCOME_OK
        assert outcomes["broken"].startswith("error: ")
        errors = log_storage.read("ERROR")
        assert [e.message for e in errors] == ["bench scenario failed"]
        assert errors[0].attributes["scenario_id"] == "broken"
        assert "bench finished" in log_storage.messages()

    def test_suite_is_timed(
        self, tmp_path: Path, log_storage: InMemoryLogStorage
    ) -> None:
        """The run is bracketed by entry and exit lines with the elapsed time."""
        shutil.copytree(FIXTURES_DIR / "fig5", tmp_path / "fig5")
        BenchRunner([Strategy.ABFS], verify=False).run(tmp_path)
        timed = [
            e for e in log_storage.read("INFO") if e.message.startswith("bench suite")
        ]
        assert [e.message for e in timed] == [
            "bench suite [entry]",
            "bench suite [exit]",
        ]
        assert timed[1].attributes["scenarios"] == 1
        assert timed[1].attributes["elapsed_seconds"] >= 0.0

    def test_empty_suite(self, tmp_path: Path) -> None:
        """A directory without scenarios yields no rows."""
        result = run_bench(tmp_path)
        assert result.rows == []
        assert result.passed(strict=True)

    def test_missing_suite(self, tmp_path: Path) -> None:
        """A missing suite directory is an input error."""
        with pytest.raises(InputDomainError):
            run_bench(tmp_path / "nowhere")

    def test_constant_clock_gives_no_speedup(self) -> None:
        """A zero wall clock cannot be compared."""
        runner = BenchRunner(verify=False, time_func=lambda: 1.0)
        rows = runner.run(FIXTURES_DIR).rows
        assert all(r.wall_clock_s == 0.0 for r in rows)
        assert all(math.isnan(r.speedup_vs_abfs) for r in rows)


class TestVerify:
    """Tests for the oracle cross-check."""

    @pytest.mark.tra("Planner.Oracle.SeededMaps")
    def test_random_maps_keep_abfs_optimal(self) -> None:
        """Seeded random maps never show an Abfs delta."""
        reports = verify_random(20, size=12, seed=3)
        assert len(reports) == 20
        assert all(r.abfs_ok for r in reports)
        assert all(r.passed(strict=False) for r in reports)

    def test_random_maps_are_seeded(self) -> None:
        """The same seed gives the same costs."""
        first = [r.costs for r in verify_random(3, size=8, seed=11)]
        second = [r.costs for r in verify_random(3, size=8, seed=11)]
        assert first == second

    def test_no_path_agrees_with_oracle(self) -> None:
        """Everyone agrees when the goal is walled off."""
        grid = HeightGrid.from_rows([[0.0, 3.0, 0.0]] * 3)
        scenario = Scenario("walled", "", CellIndex(0, 0), CellIndex(2, 2))
        report = run_verify(grid, scenario)
        assert set(report.costs.values()) == {None}
        assert report.delta(Strategy.ABFS) is None
        assert report.transitions_ok == {}
        assert report.passed(strict=True)

    def test_no_path_rows(self, tmp_path: Path) -> None:
        """An unreachable goal is a no_path row, not an error."""
        grid = HeightGrid.from_rows([[0.0, 3.0, 0.0]] * 3)
        write_bytes(tmp_path / "walled" / "map.json", save_map(grid))
        write_bytes(
            tmp_path / "walled" / "scenario.json",
            b'{"map": "map.json", "start": [0, 0], "goal": [2, 2]}',
        )
        rows = run_bench(tmp_path).rows
        assert {r.outcome for r in rows} == {OUTCOME_NO_PATH}
        assert all(r.path_steps == 0 for r in rows)


class TestBaseline:
    """Tests for comparing a run against a saved bench table."""

    def test_same_run_has_no_differences(self, curated: BenchResult) -> None:
        """The curated run repeats itself exactly."""
        assert compare_baseline(curated.rows, run_bench(FIXTURES_DIR).rows) == []

    def test_wall_clock_is_not_compared(self) -> None:
        """Timing columns may drift between runs."""
        old = [MetricsRow("fig5", "abfs", total_time_s=9.0, wall_clock_s=0.1)]
        new = [MetricsRow("fig5", "abfs", total_time_s=9.0, wall_clock_s=0.3)]
        assert compare_baseline(old, new) == []

    def test_missing_pairs_are_reported(self) -> None:
        """A pair on only one side is named with the side it is missing from."""
        old = [MetricsRow("fig5", "abfs", total_time_s=9.0)]
        new = [MetricsRow("fig5", "gbfs", total_time_s=9.0)]
        assert compare_baseline(old, new) == [
            "fig5/abfs: missing from this run",
            "fig5/gbfs: missing from baseline",
        ]

    def test_no_path_costs_match(self) -> None:
        """Two no_path rows with NaN costs agree."""
        rows = [MetricsRow("walled", "abfs", outcome=OUTCOME_NO_PATH)]
        assert compare_baseline(rows, rows) == []

    def test_cost_change_is_reported(self) -> None:
        """A cost beyond the tolerance is a difference."""
        old = [MetricsRow("fig5", "abfs", total_time_s=9.0)]
        new = [MetricsRow("fig5", "abfs", total_time_s=math.nan)]
        assert compare_baseline(old, new) == ["fig5/abfs: total_time_s 9.0 != nan"]
