"""Standard library logging handler writing to a LogSinkPort.

Records produced by ``mmplanner.core.logs`` carry their structured fields
as ``extra``; this handler turns them back into LogEntry objects, merged
with the active log context.
"""

import logging
import traceback
from collections.abc import Callable

from mmplanner.core.exceptions import ConfigurationError
from mmplanner.core.logs import RESERVED_RECORD_ATTRS, LogAttribute
from mmplanner.core.models import LogEntry
from mmplanner.core.ports import LogSinkPort

ContextProvider = Callable[[], dict[str, LogAttribute]]

_LEVEL_NAMES = {"WARNING": "WARN", "CRITICAL": "ERROR"}

_LEVELS = {
    "DEBUG": logging.DEBUG,
    "INFO": logging.INFO,
    "WARN": logging.WARNING,
    "WARNING": logging.WARNING,
    "ERROR": logging.ERROR,
}


def resolve_level(name: str) -> int:
    """Map a level name to its stdlib number.

    Example:
        >>> resolve_level("warn") == logging.WARNING
        True
    """
    try:
        return _LEVELS[name.upper()]
    except KeyError as e:
        raise ConfigurationError(
            f"log level must be one of DEBUG, INFO, WARN, ERROR, got {name!r}"
        ) from e


class StructuredLogHandler(logging.Handler):
    """Logging handler that writes records to a LogSinkPort.

    Example:
        >>> import logging
        >>> from mmplanner import InMemoryLogStorage, get_logger
        >>> storage = InMemoryLogStorage()
        >>> handler = StructuredLogHandler(storage)
        >>> stdlib = logging.getLogger("mmplanner.doctest")
        >>> stdlib.addHandler(handler)
        >>> stdlib.setLevel(logging.INFO)
        >>> _ = get_logger("mmplanner.doctest").with_fields(n=3).info("done")
        >>> stdlib.removeHandler(handler)
        >>> storage.read()[0].attributes["n"]
        3
    """

    def __init__(
        self,
        sink: LogSinkPort,
        context_provider: ContextProvider | None = None,
        level: int = logging.NOTSET,
    ) -> None:
        super().__init__(level)
        self._sink = sink
        # Called per record, e.g. ``get_log_context``.
        self._context_provider = context_provider

    def emit(self, record: logging.LogRecord) -> None:
        """Convert a record and write it to the sink."""
        context = self._context_provider() if self._context_provider else {}
        # Record extras override context keys.
        attributes: dict[str, LogAttribute] = {
            **context,
            **{
                key: value
                for key, value in vars(record).items()
                if key not in RESERVED_RECORD_ATTRS
                and isinstance(value, str | int | float | bool)
            },
            **_failure_fields(record),
        }
        entry = LogEntry(
            record.created,
            _LEVEL_NAMES.get(record.levelname, record.levelname),
            record.getMessage(),
            attributes,
        )
        try:
            self._sink.write(entry)
        except Exception:
            self.handleError(record)


def _failure_fields(record: logging.LogRecord) -> dict[str, LogAttribute]:
    if not record.exc_info or record.exc_info[1] is None:
        return {}
    error = record.exc_info[1]
    return {
        "exc_type": type(error).__name__,
        "exc_message": str(error),
        "exc_traceback": "".join(traceback.format_exception(error)),
    }


def install_handler(
    sink: LogSinkPort,
    level: str = "INFO",
    context_provider: ContextProvider | None = None,
    logger_name: str = "mmplanner",
) -> StructuredLogHandler:
    """Attach a handler to the package logger and set its level.

    Returns:
        The installed handler, so callers can remove it again.
    """
    handler = StructuredLogHandler(sink, context_provider=context_provider)
    logger = logging.getLogger(logger_name)
    logger.addHandler(handler)
    logger.setLevel(resolve_level(level))
    logger.propagate = False
    return handler


def remove_handler(handler: logging.Handler, logger_name: str = "mmplanner") -> None:
    """Detach a handler installed by ``install_handler`` and reset the logger."""
    logger = logging.getLogger(logger_name)
    logger.removeHandler(handler)
    logger.setLevel(logging.NOTSET)
    logger.propagate = True
