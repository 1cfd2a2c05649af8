"""Port interfaces for log and metric sinks.

The core and the runtime depend only on these protocols; the CLI picks the
concrete adapters.
"""

from typing import Protocol, runtime_checkable

from mmplanner.core.models import LogEntry, MetricSample


# @tra: Port.LogSinkPort.DefinesContract
# DECISION(abstract): 2 impls (InMemory, Stream) + test isolation
@runtime_checkable
class LogSinkPort(Protocol):
    """Port for structured log output.

    Examples: InMemoryLogStorage, StreamLogSink.
    """

    def write(self, entry: LogEntry) -> None:
        """Accept one log entry."""
        ...

    def count(self) -> int:
        """Return the number of entries accepted so far."""
        ...


# @tra: Port.MetricsSinkPort.DefinesContract
# DECISION(abstract): bench collects samples in memory, tests assert on them
@runtime_checkable
class MetricsSinkPort(Protocol):
    """Port for metric samples emitted by the bench runner.

    Examples: InMemoryMetricsStorage.
    """

    def write(self, sample: MetricSample) -> None:
        """Accept one metric sample."""
        ...

    def read(self, name: str | None = None) -> list[MetricSample]:
        """Return accepted samples in write order, optionally by name."""
        ...
