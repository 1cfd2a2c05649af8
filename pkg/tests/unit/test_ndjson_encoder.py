"""Tests for the NDJSON encoders."""

import json

import pytest

from mmplanner.core.encoding.ndjson import (
    encode_log_line,
    encode_metric_line,
    encode_metrics,
)
from mmplanner.core.models import LogEntry, MetricSample

pytestmark = pytest.mark.encoding


class TestLogEncoding:
    """Tests for NDJSON encoding of log entries."""

    def test_encode_single_entry(self) -> None:
        """A single LogEntry encodes to one JSON line."""
        entry = LogEntry(timestamp=1702300000.0, level="INFO", message="plan finished")

        parsed = json.loads(encode_log_line(entry))

        assert parsed == {
            "timestamp": 1702300000.0,
            "level": "INFO",
            "message": "plan finished",
            "attributes": {},
        }

    def test_attributes_keep_their_types(self) -> None:
        """Attribute values survive encoding."""
        entry = LogEntry(
            timestamp=1.0,
            level="INFO",
            message="plan finished",
            attributes={"strategy": "abfs", "nodes_expanded": 42, "found": True},
        )

        parsed = json.loads(encode_log_line(entry))

        assert parsed["attributes"] == {
            "strategy": "abfs",
            "nodes_expanded": 42,
            "found": True,
        }

    def test_single_line_has_no_newline(self) -> None:
        """encode_log_line leaves line termination to the caller."""
        entry = LogEntry(timestamp=1.0, level="INFO", message="multi\nline")
        line = encode_log_line(entry)
        assert "\n" not in line
        assert json.loads(line)["message"] == "multi\nline"


class TestMetricEncoding:
    """Tests for NDJSON encoding of metric samples."""

    def test_encode_samples(self) -> None:
        """Each sample is one JSON object."""
        samples = [
            MetricSample(
                name="plan_nodes_expanded",
                timestamp=1.0,
                value=42.0,
                labels={"strategy": "abfs", "scenario_id": "fig5"},
            ),
            MetricSample(name="plan_total_time_seconds", timestamp=1.0, value=11.3),
        ]

        lines = encode_metrics(samples).strip().split("\n")

        first = json.loads(lines[0])
        assert first["name"] == "plan_nodes_expanded"
        assert first["labels"] == {"strategy": "abfs", "scenario_id": "fig5"}
        assert json.loads(lines[1])["value"] == 11.3

    def test_empty_input_is_empty_string(self) -> None:
        """No samples, no output."""
        assert encode_metrics([]) == ""

    def test_keys_are_sorted(self) -> None:
        """Metric lines are stable for diffing."""
        labels = {"b": "1", "a": "2"}
        sample = MetricSample("plan_wall_clock_seconds", 2.0, 0.01, labels)
        assert encode_metric_line(sample) == (
            '{"labels": {"a": "2", "b": "1"}, "name": "plan_wall_clock_seconds", '
            '"timestamp": 2.0, "value": 0.01}'
        )
