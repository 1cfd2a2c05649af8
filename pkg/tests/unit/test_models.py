"""Tests for core domain models."""

import dataclasses

import pytest

from mmplanner.core.exceptions import ConfigurationError
from mmplanner.core.models import (
    CellIndex,
    EdgeCost,
    LogEntry,
    MetricSample,
    MoveKind,
    RobotProfile,
    TraversalClass,
)

pytestmark = pytest.mark.core


class TestCellIndex:
    """Tests for the CellIndex value type."""

    def test_cell_index_unpacks_as_tuple(self) -> None:
        """CellIndex behaves like an (x, y) tuple."""
        x, y = CellIndex(3, 4)
        assert (x, y) == (3, 4)

    def test_cell_index_equality_and_hash(self) -> None:
        """Equal cells hash equally so they can key dicts and sets."""
        assert CellIndex(1, 2) == CellIndex(1, 2)
        assert len({CellIndex(1, 2), CellIndex(1, 2), CellIndex(2, 1)}) == 2


class TestEnums:
    """Tests for the move and traversal enums."""

    def test_move_kind_values(self) -> None:
        """MoveKind serializes to lower-case names."""
        assert str(MoveKind.CARDINAL) == "cardinal"
        assert str(MoveKind.DIAGONAL) == "diagonal"

    def test_traversal_class_values(self) -> None:
        """TraversalClass has exactly three members."""
        assert {str(t) for t in TraversalClass} == {"direct", "overcome", "blocked"}


class TestRobotProfile:
    """Tests for RobotProfile defaults and validation."""

    def test_defaults(self) -> None:
        """Defaults match the documented robot."""
        profile = RobotProfile()
        assert profile.speed == 1.0
        assert profile.t_up == 4.0
        assert profile.t_down == 3.0
        assert profile.max_direct_height == 0.05
        assert profile.max_overcome_height == 0.5
        assert profile.overcome_enabled is True

    def test_profile_is_frozen(self) -> None:
        """RobotProfile cannot be mutated."""
        profile = RobotProfile()
        with pytest.raises(dataclasses.FrozenInstanceError):
            profile.speed = 2.0  # type: ignore[misc]

    @pytest.mark.parametrize(
        "name", ["speed", "footprint_radius", "v_max", "omega_max", "accel_v"]
    )
    def test_positive_fields_reject_zero(self, name: str) -> None:
        """Rates and limits must be strictly positive."""
        with pytest.raises(ConfigurationError, match=f"{name} must be positive"):
            RobotProfile(**{name: 0.0})

    @pytest.mark.parametrize("name", ["t_up", "t_down", "max_direct_height"])
    def test_non_negative_fields_reject_negative(self, name: str) -> None:
        """Climb rates and the direct threshold may be zero but not negative."""
        with pytest.raises(ConfigurationError, match=f"{name} must be non-negative"):
            RobotProfile(**{name: -0.1})

    def test_zero_climb_rates_are_allowed(self) -> None:
        """A robot that climbs for free is a valid profile."""
        assert RobotProfile(t_up=0.0, t_down=0.0).t_up == 0.0

    def test_rejects_nan_speed(self) -> None:
        """NaN never passes validation."""
        with pytest.raises(ConfigurationError, match="speed"):
            RobotProfile(speed=float("nan"))

    def test_direct_threshold_must_not_exceed_overcome_threshold(self) -> None:
        """Thresholds must be ordered."""
        with pytest.raises(ConfigurationError, match="max_direct_height"):
            RobotProfile(max_direct_height=0.6, max_overcome_height=0.5)

    def test_v_min_must_not_exceed_v_max(self) -> None:
        """The velocity range must be non-empty."""
        with pytest.raises(ConfigurationError, match="v_min"):
            RobotProfile(v_min=2.0, v_max=1.0)


class TestEdgeCost:
    """Tests for EdgeCost."""

    def test_total_is_exact_sum(self) -> None:
        """Total time is travel plus overcoming."""
        cost = EdgeCost(travel_time=1.0, overcome_time=2.4)
        assert cost.total == 3.4

    def test_overcome_defaults_to_zero(self) -> None:
        """A Direct step has no overcoming time."""
        assert EdgeCost(travel_time=1.5).total == 1.5


class TestLogEntry:
    """Tests for LogEntry model."""

    def test_create_log_entry(self) -> None:
        """LogEntry holds timestamp, level, message and attributes."""
        entry = LogEntry(
            timestamp=1702300000.0,
            level="INFO",
            message="plan finished",
            attributes={"strategy": "abfs", "nodes_expanded": 42},
        )
        assert entry.level == "INFO"
        assert entry.attributes["nodes_expanded"] == 42

    def test_attributes_default_to_empty(self) -> None:
        """Attributes default to an empty dict."""
        assert LogEntry(timestamp=0.0, level="DEBUG", message="x").attributes == {}

    def test_log_entry_is_immutable(self) -> None:
        """LogEntry cannot be reassigned."""
        entry = LogEntry(timestamp=0.0, level="INFO", message="x")
        with pytest.raises(dataclasses.FrozenInstanceError):
            entry.message = "y"  # type: ignore[misc]


class TestMetricSample:
    """Tests for MetricSample model."""

    def test_create_metric_sample(self) -> None:
        """MetricSample holds name, timestamp, value and labels."""
        sample = MetricSample(
            name="plan_nodes_expanded",
            timestamp=1702300000.0,
            value=42.0,
            labels={"strategy": "abfs"},
        )
        assert sample.name == "plan_nodes_expanded"
        assert sample.labels == {"strategy": "abfs"}

    def test_labels_default_to_empty(self) -> None:
        """Labels default to an empty dict."""
        sample = MetricSample(name="x", timestamp=0.0, value=1.0)
        assert sample.labels == {}
