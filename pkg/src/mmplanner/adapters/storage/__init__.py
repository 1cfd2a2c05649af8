"""Log and metric sink adapters."""

from mmplanner.adapters.storage.in_memory import (
    InMemoryLogStorage,
    InMemoryMetricsStorage,
)
from mmplanner.adapters.storage.stream import StreamLogSink

__all__ = ["InMemoryLogStorage", "InMemoryMetricsStorage", "StreamLogSink"]
