"""In-memory sinks for logs and metrics."""

from collections.abc import Iterable

from mmplanner.core.models import LogEntry, MetricSample


class _Buffer[T]:
    """Append-only list of items in write order."""

    def __init__(self) -> None:
        self._items: list[T] = []

    def write(self, item: T) -> None:
        self._items.append(item)

    def write_batch(self, items: Iterable[T]) -> None:
        self._items.extend(items)

    def clear(self) -> None:
        self._items.clear()

    def count(self) -> int:
        return len(self._items)


class InMemoryLogStorage(_Buffer[LogEntry]):
    """LogSinkPort kept in a list.

    Test fixtures capture records here, and the bench runner reads back
    per-scenario failures.

    Example:
        >>> from mmplanner import InMemoryLogStorage, LogEntry
        >>> storage = InMemoryLogStorage()
        >>> storage.write(LogEntry(1.0, "WARN", "slow"))
        >>> storage.read("warn")[0].message, storage.count()
        ('slow', 1)
    """

    def read(self, level: str | None = None) -> list[LogEntry]:
        """Entries in write order; ``level`` filters ignoring case."""
        if level is None:
            return list(self._items)
        return [e for e in self._items if e.level.casefold() == level.casefold()]

    def messages(self) -> list[str]:
        return [e.message for e in self._items]


class InMemoryMetricsStorage(_Buffer[MetricSample]):
    """MetricsSinkPort kept in a list.

    Example:
        >>> from mmplanner import InMemoryMetricsStorage, MetricSample
        >>> storage = InMemoryMetricsStorage()
        >>> storage.write(MetricSample("plan_nodes_expanded", 1.0, 12.0))
        >>> [s.value for s in storage.read("plan_nodes_expanded")]
        [12.0]
    """

    def read(self, name: str | None = None) -> list[MetricSample]:
        """Samples in write order, only those called ``name`` if given."""
        return [s for s in self._items if name is None or s.name == name]
