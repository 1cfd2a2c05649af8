"""Tests for the global planners on hand-built maps and the curated fixtures."""

import dataclasses
import math
from collections.abc import Callable
from itertools import pairwise

import pytest

from mmplanner.core.costmodel import SQRT2, Metric, heuristic_time
from mmplanner.core.exceptions import (
    ConfigurationError,
    InputDomainError,
    InternalConsistencyError,
)
from mmplanner.core.gridmap import HeightGrid, move_kind
from mmplanner.core.models import CellIndex, RobotProfile, TraversalClass
from mmplanner.core.planner import (
    NoPath,
    PlannerConfig,
    PlanResult,
    SearchNode,
    StepMode,
    Strategy,
    check_transitions,
    describe_path,
    oracle_plan,
    plan,
    reconstruct_path,
)
from mmplanner.core.scenario import Scenario

pytestmark = pytest.mark.planner

Loader = Callable[[str], tuple[Scenario, HeightGrid]]

ALL_STRATEGIES = (Strategy.ABFS, Strategy.GBFS, Strategy.MULTIMODAL)

FIXTURES = ("fig2a", "fig2b", "fig3a", "fig3b", "fig4a", "fig4b", "fig5", "factory")


def _run(
    load_fixture: Loader, name: str, strategy: Strategy, *, planar: bool = False
) -> PlanResult | NoPath:
    scenario, grid = load_fixture(name)
    profile = scenario.profile
    if planar:
        profile = dataclasses.replace(profile, overcome_enabled=False)
    return plan(
        grid,
        scenario.start,
        scenario.goal,
        profile,
        strategy,
        scenario.metric,
        config=scenario.planner,
    )


def _found(result: PlanResult | NoPath) -> PlanResult:
    assert isinstance(result, PlanResult), result
    return result


class TestStrategy:
    """Tests for Strategy parsing."""

    @pytest.mark.parametrize(
        ("name", "expected"),
        [
            ("abfs", Strategy.ABFS),
            ("astar", Strategy.ABFS),
            ("greedy", Strategy.GBFS),
            ("GBFS", Strategy.GBFS),
            (" multimodal ", Strategy.MULTIMODAL),
        ],
    )
    def test_parse_accepts_names_and_aliases(
        self, name: str, expected: Strategy
    ) -> None:
        """CLI aliases resolve to the canonical strategies."""
        assert Strategy.parse(name) is expected

    def test_parse_rejects_unknown_names(self) -> None:
        """Unknown strategies are configuration errors."""
        with pytest.raises(ConfigurationError, match="strategy must be one of"):
            Strategy.parse("dijkstra")

    def test_planner_config_rejects_negative_threshold(self) -> None:
        """The switch threshold cannot be negative."""
        with pytest.raises(ConfigurationError, match="switch_threshold"):
            PlannerConfig(switch_threshold=-1.0)


class TestPlanBasics:
    """Tests for plan() on small hand-built maps."""

    @pytest.mark.parametrize("strategy", ALL_STRATEGIES)
    def test_start_equals_goal(
        self, flat_grid: HeightGrid, profile: RobotProfile, strategy: Strategy
    ) -> None:
        """The trivial task is a one-cell path with zero cost."""
        centre = CellIndex(2, 2)
        result = _found(plan(flat_grid, centre, centre, profile, strategy))
        assert result.path == (CellIndex(2, 2),)
        assert result.total_time == 0.0
        assert result.stats.nodes_expanded == 0

    def test_flat_diagonal_run(
        self, flat_grid: HeightGrid, profile: RobotProfile
    ) -> None:
        """Opposite corners of a flat 5x5 grid cost 4 * sqrt(2)."""
        result = _found(plan(flat_grid, CellIndex(0, 0), CellIndex(4, 4), profile))
        assert result.total_time == pytest.approx(4 * SQRT2, abs=1e-9)
        assert result.path_steps == 4
        assert result.strategy == "abfs"

    @pytest.mark.parametrize(
        ("start", "goal"),
        [(CellIndex(-1, 0), CellIndex(1, 1)), (CellIndex(0, 0), CellIndex(5, 0))],
    )
    def test_off_grid_endpoints_raise(
        self,
        flat_grid: HeightGrid,
        profile: RobotProfile,
        start: CellIndex,
        goal: CellIndex,
    ) -> None:
        """Endpoints must lie on the grid."""
        with pytest.raises(InputDomainError, match="outside"):
            plan(flat_grid, start, goal, profile)

    @pytest.mark.parametrize("strategy", ALL_STRATEGIES)
    def test_walled_off_goal_returns_no_path(
        self, profile: RobotProfile, strategy: Strategy
    ) -> None:
        """An unreachable goal is a NoPath result, not an error."""
        grid = HeightGrid.from_rows([[0.0, 3.0, 0.0]] * 3)
        result = plan(grid, CellIndex(0, 1), CellIndex(2, 1), profile, strategy)
        assert isinstance(result, NoPath)
        assert result.strategy == str(strategy)
        assert result.stats.nodes_expanded > 0

    def test_wall_start_cell_can_still_leave(self, profile: RobotProfile) -> None:
        """A start on a pedestal leaves by climbing down."""
        grid = HeightGrid.from_rows([[0.3, 0.0, 0.0]])
        result = _found(plan(grid, CellIndex(0, 0), CellIndex(2, 0), profile))
        assert result.steps[0].mode is StepMode.OVERCOME_DOWN
        assert result.total_time == pytest.approx(2 + 0.9)

    def test_manhattan_metric_is_recorded(
        self, flat_grid: HeightGrid, profile: RobotProfile
    ) -> None:
        """The metric used ends up in the result."""
        result = _found(
            plan(
                flat_grid,
                CellIndex(0, 0),
                CellIndex(3, 1),
                profile,
                metric=Metric.MANHATTAN,
            )
        )
        assert result.metric is Metric.MANHATTAN

    def test_wall_clock_uses_injected_clock(
        self, flat_grid: HeightGrid, profile: RobotProfile
    ) -> None:
        """plan() measures its search with the given clock."""
        ticks = iter([5.0, 5.5])
        result = plan(
            flat_grid,
            CellIndex(0, 0),
            CellIndex(1, 1),
            profile,
            time_func=ticks.__next__,
        )
        assert result.stats.wall_clock == 0.5

    @pytest.mark.parametrize("strategy", ALL_STRATEGIES)
    def test_result_invariants(
        self, profile: RobotProfile, strategy: Strategy
    ) -> None:
        """Paths are adjacent chains from start to goal and totals recompute."""
        rows = [[0.0] * 7 for _ in range(7)]
        for y in range(1, 6):
            rows[y][3] = 0.2 if y == 3 else 3.0
        grid = HeightGrid.from_rows(rows)
        start, goal = CellIndex(0, 3), CellIndex(6, 3)
        result = _found(plan(grid, start, goal, profile, strategy))
        assert result.path[0] == start
        assert result.path[-1] == goal
        for a, b in pairwise(result.path):
            move_kind(a, b)
        steps, total = describe_path(grid, list(result.path), profile)
        assert steps == result.steps
        assert abs(total - result.total_time) <= 1e-9
        assert check_transitions(grid, result, profile)
        assert result.stats.nodes_expanded <= result.stats.nodes_generated
        assert len(set(result.searched)) == len(result.searched)

    @pytest.mark.parametrize("strategy", ALL_STRATEGIES)
    def test_repeated_runs_are_identical(
        self, profile: RobotProfile, strategy: Strategy
    ) -> None:
        """Tie-breaking is fully deterministic."""
        rows = [[0.0] * 9 for _ in range(9)]
        for x in range(2, 9):
            rows[4][x] = 3.0
        grid = HeightGrid.from_rows(rows)
        first = plan(grid, CellIndex(5, 8), CellIndex(5, 0), profile, strategy)
        second = plan(grid, CellIndex(5, 8), CellIndex(5, 0), profile, strategy)
        assert first == second


class TestReconstructPath:
    """Tests for the parent-pointer walk."""

    def test_single_cell_chain(self) -> None:
        """A start-only chain is a one-cell path."""
        a = CellIndex(0, 0)
        assert reconstruct_path({a: SearchNode(a, 0.0, 0.0)}, a) == [a]

    def test_two_cell_chain(self) -> None:
        """Parents come before children."""
        a, b = CellIndex(0, 0), CellIndex(1, 0)
        closed = {a: SearchNode(a, 0.0, 1.0), b: SearchNode(b, 1.0, 1.0, a)}
        assert reconstruct_path(closed, b) == [a, b]

    def test_jump_point_segments_are_spliced(self) -> None:
        """Cells walked by an episode reappear between parent and jump point."""
        a, m, j = CellIndex(0, 0), CellIndex(1, 0), CellIndex(2, 0)
        closed = {
            a: SearchNode(a, 0.0, 2.0),
            j: SearchNode(j, 2.0, 2.0, parent=a, via=(m,)),
        }
        assert reconstruct_path(closed, j) == [a, m, j]

    def test_missing_parent_is_internal_error(self) -> None:
        """A parent outside the closed set is a bookkeeping failure."""
        a, b = CellIndex(0, 0), CellIndex(1, 0)
        closed = {b: SearchNode(b, 1.0, 1.0, a)}
        with pytest.raises(InternalConsistencyError, match="not closed"):
            reconstruct_path(closed, b)

    def test_missing_goal_is_internal_error(self) -> None:
        """The goal must be closed."""
        with pytest.raises(InternalConsistencyError, match="goal"):
            reconstruct_path({}, CellIndex(0, 0))

    def test_parent_loop_is_internal_error(self) -> None:
        """Cyclic parent chains are detected."""
        a, b = CellIndex(0, 0), CellIndex(1, 0)
        closed = {a: SearchNode(a, 0.0, 0.0, b), b: SearchNode(b, 1.0, 1.0, a)}
        with pytest.raises(InternalConsistencyError, match="loops"):
            reconstruct_path(closed, b)


class TestOracle:
    """Tests for the uniform-cost oracle."""

    def test_start_equals_goal_costs_nothing(
        self, flat_grid: HeightGrid, profile: RobotProfile
    ) -> None:
        """Identity task costs zero."""
        cell = CellIndex(3, 3)
        result = _found(oracle_plan(flat_grid, cell, cell, profile))
        assert result.total_time == 0.0
        assert result.path == (CellIndex(3, 3),)

    def test_flat_corners(self, flat_grid: HeightGrid, profile: RobotProfile) -> None:
        """Opposite corners of a flat 5x5 grid cost 4 * sqrt(2)."""
        start, goal = CellIndex(0, 0), CellIndex(4, 4)
        result = _found(oracle_plan(flat_grid, start, goal, profile))
        assert result.total_time == pytest.approx(4 * SQRT2, abs=1e-9)
        assert result.strategy == "oracle"

    def test_two_cell_climb(self) -> None:
        """Climbing onto a 1 m block costs 5 s."""
        grid = HeightGrid.from_rows([[0.0, 1.0]])
        profile = RobotProfile(max_overcome_height=1.0)
        result = _found(oracle_plan(grid, CellIndex(0, 0), CellIndex(1, 0), profile))
        assert result.total_time == 5.0
        assert result.steps[0].traversal is TraversalClass.OVERCOME

    def test_unreachable_goal(self, profile: RobotProfile) -> None:
        """The oracle reports NoPath like the planners."""
        grid = HeightGrid.from_rows([[0.0, 3.0, 0.0]])
        assert isinstance(
            oracle_plan(grid, CellIndex(0, 0), CellIndex(2, 0), profile), NoPath
        )


@pytest.mark.tra("Planner.Fixtures.MatchOracle")
class TestCuratedFixtures:
    """Behaviour of every strategy on the curated fixture suite."""

    @pytest.mark.parametrize("name", FIXTURES)
    def test_abfs_and_multimodal_match_oracle(
        self, load_fixture: Loader, name: str
    ) -> None:
        """Abfs and Multimodal are optimal on every curated fixture."""
        scenario, grid = load_fixture(name)
        best = _found(
            oracle_plan(grid, scenario.start, scenario.goal, scenario.profile)
        )
        for strategy in (Strategy.ABFS, Strategy.MULTIMODAL):
            result = _found(_run(load_fixture, name, strategy))
            assert abs(result.total_time - best.total_time) <= 1e-9

    @pytest.mark.parametrize("name", FIXTURES)
    @pytest.mark.parametrize("strategy", ALL_STRATEGIES)
    def test_no_path_crosses_a_blocked_step(
        self, load_fixture: Loader, name: str, strategy: Strategy
    ) -> None:
        """No strategy ever returns a Blocked transition."""
        scenario, grid = load_fixture(name)
        result = _found(_run(load_fixture, name, strategy))
        assert check_transitions(grid, result, scenario.profile)

    @pytest.mark.parametrize("name", FIXTURES)
    @pytest.mark.parametrize("strategy", [Strategy.ABFS, Strategy.GBFS])
    def test_single_mode_strategies_never_follow_walls(
        self, load_fixture: Loader, name: str, strategy: Strategy
    ) -> None:
        """Episode counters stay at zero outside Multimodal."""
        stats = _found(_run(load_fixture, name, strategy)).stats
        assert (stats.mode_switches, stats.jump_points, stats.nodes_followed) == (
            0,
            0,
            0,
        )

    def test_fig2a_climbs_the_wall(self, load_fixture: Loader) -> None:
        """With no way around, the path climbs up and then down."""
        result = _found(_run(load_fixture, "fig2a", Strategy.MULTIMODAL))
        modes = [s.mode for s in result.steps if s.traversal is TraversalClass.OVERCOME]
        assert modes == [StepMode.OVERCOME_UP, StepMode.OVERCOME_DOWN]
        assert result.total_time == pytest.approx(12.2, abs=1e-9)

    def test_fig2b_multimodal_matches_abfs(self, load_fixture: Loader) -> None:
        """With a cheap detour, Multimodal agrees with Abfs and expands no more."""
        abfs = _found(_run(load_fixture, "fig2b", Strategy.ABFS))
        multimodal = _found(_run(load_fixture, "fig2b", Strategy.MULTIMODAL))
        assert multimodal.total_time == pytest.approx(abfs.total_time, abs=1e-9)
        assert abfs.total_time == pytest.approx(8 * SQRT2, abs=1e-9)
        assert multimodal.overcome_steps == 0
        assert multimodal.stats.mode_switches >= 1
        assert multimodal.stats.nodes_expanded <= abfs.stats.nodes_expanded

    def test_fig3a_climbs_the_block(self, load_fixture: Loader) -> None:
        """Climbing the 0.4 m block beats the detour."""
        result = _found(_run(load_fixture, "fig3a", Strategy.MULTIMODAL))
        assert result.overcome_steps == 2
        assert result.total_time == pytest.approx(10.8, abs=1e-9)

    def test_fig3b_detours(self, load_fixture: Loader) -> None:
        """A shorter detour wins and the path stays on the floor."""
        result = _found(_run(load_fixture, "fig3b", Strategy.ABFS))
        assert result.overcome_steps == 0
        assert result.total_time == pytest.approx(2 + 6 * SQRT2, abs=1e-9)

    def test_fig4a_enters_the_enclosure(self, load_fixture: Loader) -> None:
        """The ring around the goal is climbed over."""
        result = _found(_run(load_fixture, "fig4a", Strategy.MULTIMODAL))
        assert result.overcome_steps == 2

    def test_fig4b_final_step_climbs_onto_the_goal(self, load_fixture: Loader) -> None:
        """The goal on a pedestal is reached by a final Overcome step."""
        result = _found(_run(load_fixture, "fig4b", Strategy.MULTIMODAL))
        assert result.steps[-1].traversal is TraversalClass.OVERCOME
        assert result.steps[-1].mode is StepMode.OVERCOME_UP
        assert result.total_time == pytest.approx(6.2, abs=1e-9)

    @pytest.mark.parametrize("name", ["fig4a", "fig4b"])
    @pytest.mark.parametrize("strategy", ALL_STRATEGIES)
    def test_planar_mode_cannot_reach_raised_goals(
        self, load_fixture: Loader, name: str, strategy: Strategy
    ) -> None:
        """A flat 2D planner has no path to a goal on a block."""
        result = _run(load_fixture, name, strategy, planar=True)
        assert isinstance(result, NoPath)

    def test_fig5_orderings(self, load_fixture: Loader) -> None:
        """Gbfs takes a longer path; Multimodal expands no more than Abfs."""
        abfs = _found(_run(load_fixture, "fig5", Strategy.ABFS))
        gbfs = _found(_run(load_fixture, "fig5", Strategy.GBFS))
        multimodal = _found(_run(load_fixture, "fig5", Strategy.MULTIMODAL))
        assert gbfs.path_steps > abfs.path_steps == multimodal.path_steps
        assert gbfs.total_time > abfs.total_time
        assert abfs.total_time == pytest.approx(8 * SQRT2, abs=1e-9)
        assert multimodal.stats.nodes_expanded <= abfs.stats.nodes_expanded
        assert multimodal.stats.mode_switches >= 1
        assert abfs.stats.mode_switches == 0

    def test_factory_expansion_order(self, load_fixture: Loader) -> None:
        """On the factory hall Gbfs < Multimodal < Abfs in expanded cells."""
        abfs = _found(_run(load_fixture, "factory", Strategy.ABFS))
        gbfs = _found(_run(load_fixture, "factory", Strategy.GBFS))
        multimodal = _found(_run(load_fixture, "factory", Strategy.MULTIMODAL))
        expanded = [r.stats.nodes_expanded for r in (gbfs, multimodal, abfs)]
        assert expanded == sorted(set(expanded))
        assert abfs.total_time == pytest.approx(23.9 + 4 * math.sqrt(2), abs=1e-9)
        assert multimodal.total_time == pytest.approx(abfs.total_time, abs=1e-9)
        assert multimodal.stats.mode_switches >= 1


class TestAbfsOrdering:
    """Consistency checks on the Abfs expansion order."""

    def test_popped_f_is_non_decreasing(self, profile: RobotProfile) -> None:
        """With the octile metric, f of expanded cells never decreases."""
        rows = [[0.0] * 10 for _ in range(10)]
        for y in range(2, 9):
            rows[y][5] = 0.3 if y % 3 == 0 else 3.0
        grid = HeightGrid.from_rows(rows)
        start, goal = CellIndex(0, 5), CellIndex(9, 4)
        result = _found(plan(grid, start, goal, profile))
        best = _found(oracle_plan(grid, start, goal, profile))
        assert result.total_time == pytest.approx(best.total_time, abs=1e-9)
        # Recompute exact g along the search footprint from the oracle's side.
        fs = []
        for cell in result.searched:
            reached = oracle_plan(grid, start, cell, profile)
            g = _found(reached).total_time
            fs.append(g + heuristic_time(cell, goal, grid, profile))
        assert all(b >= a - 1e-9 for a, b in pairwise(fs))
        assert math.isfinite(fs[-1])
