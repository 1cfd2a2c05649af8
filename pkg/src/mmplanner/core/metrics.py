"""Metric samples for planner runs and bench rows.

Samples are plain records; whoever holds a ``MetricsSinkPort`` decides
where they go. Names follow ``<subject>_<quantity>[_<unit>]``, e.g.
``plan_nodes_expanded`` or ``plan_wall_clock_seconds``.
"""

import time
from collections.abc import Callable, Generator
from contextlib import contextmanager
from dataclasses import dataclass, field

from mmplanner.core.models import MetricSample

Labels = dict[str, str]


def _sample(name: str, value: float, labels: Labels | None) -> MetricSample:
    return MetricSample(name, time.time(), value, dict(labels or {}))


def counter(
    name: str, value: float = 1.0, labels: Labels | None = None
) -> MetricSample:
    """A count, such as expansions in one search.

    Example:
        >>> sample = counter("plan_nodes_expanded", 42, labels={"strategy": "abfs"})
        >>> sample.value, sample.labels
        (42, {'strategy': 'abfs'})
    """
    return _sample(name, value, labels)


def gauge(name: str, value: float, labels: Labels | None = None) -> MetricSample:
    """A point measurement, such as a plan's total time.

    Example:
        >>> gauge("plan_total_time_seconds", 11.3).value
        11.3
    """
    return _sample(name, value, labels)


@dataclass
class TimerResult:
    """Elapsed seconds of a ``timer`` block, filled in when it exits."""

    name: str
    labels: Labels = field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def sample(self) -> MetricSample:
        """The elapsed time as a gauge."""
        return gauge(self.name, self.elapsed, self.labels)


@contextmanager
def timer(
    name: str,
    labels: Labels | None = None,
    time_func: Callable[[], float] = time.perf_counter,
) -> Generator[TimerResult]:
    """Measure the wall clock of a block, also when it raises.

    Example:
        >>> ticks = iter([10.0, 10.25])
        >>> with timer("plan_wall_clock_seconds", time_func=ticks.__next__) as t:
        ...     pass
        >>> t.elapsed, t.sample.name
        (0.25, 'plan_wall_clock_seconds')
    """
    result = TimerResult(name, dict(labels or {}))
    start = time_func()
    try:
        yield result
    finally:
        result.elapsed = time_func() - start
