"""Structured logging helpers.

``get_logger`` returns a fluent logger whose calls build a ``LogEntry`` and
forward the same record to the standard library logger of that name, with
the structured fields attached as ``extra``. Handlers installed by the CLI
(see ``mmplanner.adapters.logging``) turn the records back into entries.
"""

import logging
import sys
import time
import traceback
from collections.abc import Callable, Generator, Mapping
from contextlib import contextmanager
from dataclasses import dataclass, field

from mmplanner.core.models import LogEntry, LogValue

LogAttribute = LogValue

# Names a LogRecord sets on itself; an ``extra`` key among them raises.
RESERVED_RECORD_ATTRS = frozenset(vars(logging.makeLogRecord({}))) | {
    "message",
    "asctime",
}

_LEVELS = {
    "DEBUG": logging.DEBUG,
    "INFO": logging.INFO,
    "WARN": logging.WARNING,
    "ERROR": logging.ERROR,
}


def _entry(
    level: str, message: str, attributes: Mapping[str, LogAttribute]
) -> LogEntry:
    return LogEntry(time.time(), level, message, dict(attributes))


def _extra(fields: Mapping[str, LogAttribute]) -> dict[str, LogAttribute]:
    return {k: v for k, v in fields.items() if k not in RESERVED_RECORD_ATTRS}


@dataclass(frozen=True)
class StructuredLogger:
    """Logger carrying a set of fields that every call attaches.

    Each call returns the ``LogEntry`` it built, so callers and tests can
    inspect what was logged without a handler.

    Example:
        >>> logger = get_logger("mmplanner.demo").with_fields(strategy="abfs")
        >>> logger.info("plan finished").attributes
        {'strategy': 'abfs'}
    """

    name: str
    fields: Mapping[str, LogAttribute] = field(default_factory=dict)

    def with_fields(self, **fields: LogAttribute) -> "StructuredLogger":
        """Derive a logger with extra fields; later keys override earlier ones."""
        return StructuredLogger(self.name, {**self.fields, **fields})

    def debug(self, message: str) -> LogEntry:
        return self.emit("DEBUG", message)

    def info(self, message: str) -> LogEntry:
        return self.emit("INFO", message)

    def warn(self, message: str) -> LogEntry:
        return self.emit("WARN", message)

    def error(self, message: str) -> LogEntry:
        return self.emit("ERROR", message)

    def exception(self, message: str | None = None) -> LogEntry:
        """ERROR entry for the exception being handled, traceback included."""
        entry = log_exception(message, **self.fields)
        logging.getLogger(self.name).error(
            entry.message, exc_info=True, extra=_extra(self.fields)
        )
        return entry

    def emit(self, level: str, message: str) -> LogEntry:
        """Log at a level name: DEBUG, INFO, WARN or ERROR."""
        stdlib_level = _LEVELS[level]
        target = logging.getLogger(self.name)
        if target.isEnabledFor(stdlib_level):
            target.log(stdlib_level, message, extra=_extra(self.fields))
        return _entry(level, message, self.fields)


def get_logger(name: str) -> StructuredLogger:
    """Structured logger over ``logging.getLogger(name)``.

    Example:
        >>> get_logger("mmplanner.planner").info("ready").level
        'INFO'
    """
    return StructuredLogger(name)


@dataclass
class TimedLogResult:
    """Entries written by ``timed_log``: the opening one, then the closing one."""

    logs: list[LogEntry] = field(default_factory=list)


@contextmanager
def timed_log(
    message: str,
    level: str = "INFO",
    logger: StructuredLogger | None = None,
    time_func: Callable[[], float] = time.perf_counter,
    **attributes: LogAttribute,
) -> Generator[TimedLogResult]:
    """Bracket a block with ``[entry]`` and ``[exit]`` entries.

    The exit entry carries ``elapsed_seconds`` measured with ``time_func``.
    With ``logger`` the two entries are also emitted as records.

    Example:
        >>> with timed_log("bench suite", suite="fixtures") as result:
        ...     pass
        >>> [entry.message for entry in result.logs]
        ['bench suite [entry]', 'bench suite [exit]']
        >>> "elapsed_seconds" in result.logs[1].attributes
        True
    """

    def write(suffix: str, **fields: LogAttribute) -> LogEntry:
        text = f"{message} [{suffix}]"
        merged = {"phase": suffix, **fields, **attributes}
        if logger is None:
            return _entry(level, text, merged)
        return logger.with_fields(**merged).emit(level, text)

    result = TimedLogResult()
    started = time_func()
    result.logs.append(write("entry"))
    yield result
    result.logs.append(write("exit", elapsed_seconds=time_func() - started))


def log(level: str, message: str, **attributes: LogAttribute) -> LogEntry:
    """Build a timestamped entry without touching any handler.

    Example:
        >>> entry = log("INFO", "replanned", cell_x=4)
        >>> entry.message, entry.attributes["cell_x"]
        ('replanned', 4)
    """
    return _entry(level, message, attributes)


def log_exception(message: str | None = None, **attributes: LogAttribute) -> LogEntry:
    """ERROR entry describing the exception currently being handled.

    The message defaults to the exception text. ``exception_type``,
    ``exception_message`` and ``traceback`` join the attributes.

    Example:
        >>> try:
        ...     raise ValueError("bad scenario")
        ... except ValueError:
        ...     entry = log_exception(scenario_id="fig5")
        >>> entry.message, entry.attributes["exception_type"]
        ('bad scenario', 'ValueError')
    """
    exc = sys.exc_info()[1]
    text = "" if exc is None else str(exc)
    return _entry(
        "ERROR",
        text if message is None else message,
        {
            **attributes,
            "exception_type": "Unknown" if exc is None else type(exc).__name__,
            "exception_message": text,
            "traceback": traceback.format_exc(),
        },
    )
