"""Tests for metric helper functions."""

import time

import pytest

from mmplanner.core.metrics import TimerResult, counter, gauge, timer
from mmplanner.core.models import MetricSample

pytestmark = pytest.mark.core


class TestCounterAndGauge:
    """Tests for counter() and gauge()."""

    def test_counter_defaults_to_one(self) -> None:
        """A counter increments by one unless told otherwise."""
        sample = counter("bench_scenarios_total")
        assert isinstance(sample, MetricSample)
        assert sample.value == 1.0
        assert sample.labels == {}

    def test_counter_with_value_and_labels(self) -> None:
        """Value and labels are recorded as given."""
        sample = counter("plan_nodes_expanded", 42, labels={"strategy": "abfs"})
        assert sample.value == 42
        assert sample.labels == {"strategy": "abfs"}

    def test_gauge_captures_timestamp(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """Samples are stamped with the wall clock."""
        monkeypatch.setattr(time, "time", lambda: 1702300000.0)
        sample = gauge("plan_total_time_seconds", 12.2)
        assert sample.timestamp == 1702300000.0
        assert sample.value == 12.2


class TestTimer:
    """Tests for timer() context manager."""

    def test_elapsed_from_injected_clock(self) -> None:
        """Elapsed time is the clock difference."""
        ticks = iter([5.0, 5.75])
        with timer("plan_wall_clock_seconds", time_func=lambda: next(ticks)) as t:
            assert isinstance(t, TimerResult)
        assert t.elapsed == 0.75
        sample = t.sample
        assert sample.name == "plan_wall_clock_seconds"
        assert sample.value == 0.75

    def test_labels_are_attached(self) -> None:
        """Labels end up on the recorded gauge."""
        with timer("oracle_wall_clock_seconds", labels={"scenario_id": "fig5"}) as t:
            pass
        assert t.sample.labels == {"scenario_id": "fig5"}
        assert t.elapsed >= 0.0

    def test_records_even_on_error(self) -> None:
        """Elapsed time is recorded when the block raises."""
        ticks = iter([0.0, 2.0])
        with (
            pytest.raises(RuntimeError),
            timer("plan_wall_clock_seconds", time_func=lambda: next(ticks)) as t,
        ):
            raise RuntimeError("boom")
        assert t.elapsed == 2.0
        assert t.sample.value == 2.0
