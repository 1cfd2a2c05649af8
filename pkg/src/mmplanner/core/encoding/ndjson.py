"""Newline-delimited JSON for log entries and metric samples.

One object per line, keys sorted, so bench metric files diff cleanly
between runs.
"""

import json
from collections.abc import Iterable

from mmplanner.core.models import LogEntry, MetricSample


def encode_log_line(entry: LogEntry) -> str:
    """One log entry as a JSON object, without the line terminator.

    Example:
        >>> encode_log_line(LogEntry(1.0, "INFO", "plan finished", {"n": 3}))
        '{"attributes": {"n": 3}, "level": "INFO", "message": "plan finished", \
"timestamp": 1.0}'
    """
    record = {
        "timestamp": entry.timestamp,
        "level": entry.level,
        "message": entry.message,
        "attributes": entry.attributes,
    }
    return json.dumps(record, sort_keys=True)


def encode_metric_line(sample: MetricSample) -> str:
    """One metric sample as a JSON object, without the line terminator."""
    record = {
        "name": sample.name,
        "timestamp": sample.timestamp,
        "value": sample.value,
        "labels": sample.labels,
    }
    return json.dumps(record, sort_keys=True)


def encode_metrics(samples: Iterable[MetricSample]) -> str:
    """Encode metric samples as NDJSON; the format of ``bench --metrics-out``.

    Example:
        >>> labels = {"strategy": "abfs"}
        >>> sample = MetricSample("plan_nodes_expanded", 1.0, 42.0, labels)
        >>> encode_metrics([sample])
        '{"labels": {"strategy": "abfs"}, "name": "plan_nodes_expanded", \
"timestamp": 1.0, "value": 42.0}\\n'
    """
    # Empty input is "", otherwise every line ends in "\n".
    return "".join(encode_metric_line(sample) + "\n" for sample in samples)
