"""Log sink writing one line per entry to a text stream."""

import sys
from typing import TextIO

from mmplanner.core.encoding.ndjson import encode_log_line
from mmplanner.core.exceptions import ConfigurationError
from mmplanner.core.models import LogEntry


class StreamLogSink:
    """LogSinkPort writing NDJSON (``json``) or plain text (``text``) lines.

    Example:
        >>> import io
        >>> from mmplanner import LogEntry
        >>> buffer = io.StringIO()
        >>> sink = StreamLogSink(buffer, fmt="text")
        >>> sink.write(LogEntry(0.0, "INFO", "plan finished", {"strategy": "abfs"}))
        >>> buffer.getvalue()
        'INFO plan finished strategy=abfs\\n'
    """

    def __init__(self, stream: TextIO | None = None, fmt: str = "text") -> None:
        if fmt not in ("text", "json"):
            raise ConfigurationError(f"log format must be text or json, got {fmt!r}")
        self._stream = stream if stream is not None else sys.stderr
        self._format = fmt
        self._count = 0

    def write(self, entry: LogEntry) -> None:
        """Write one entry as a single line."""
        if self._format == "json":
            line = encode_log_line(entry)
        else:
            fields = " ".join(f"{k}={v}" for k, v in entry.attributes.items())
            line = f"{entry.level} {entry.message}"
            if fields:
                line = f"{line} {fields}"
        self._stream.write(line + "\n")
        self._count += 1

    def count(self) -> int:
        """Return the number of lines written."""
        return self._count
