"""Field readers shared by the JSON document codecs.

Each reader raises MapFormatError naming the offending field, so every
document format reports errors the same way.
"""

import json
import math
from collections.abc import Mapping
from typing import Any

from mmplanner.core.exceptions import MapFormatError
from mmplanner.core.models import CellIndex


def parse_document(data: bytes | str, kind: str) -> dict[str, Any]:
    """Decode a UTF-8 JSON object.

    Example:
        >>> parse_document(b'{"a": 1}', "map")
        {'a': 1}
        >>> parse_document(b'[1]', "map")
        Traceback (most recent call last):
        ...
        mmplanner.core.exceptions.MapFormatError: map: expected a JSON object
    """
    try:
        text = data.decode("utf-8") if isinstance(data, bytes) else data
        document = json.loads(text)
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise MapFormatError(kind, f"not valid JSON ({e})") from e
    if not isinstance(document, dict):
        raise MapFormatError(kind, "expected a JSON object")
    return document


def require(document: Mapping[str, Any], name: str) -> Any:
    """Return a mandatory field."""
    if name not in document:
        raise MapFormatError(name, "missing field")
    return document[name]


def as_number(value: Any, name: str) -> float:
    """Coerce a JSON number to float, rejecting booleans and non-finite values.

    Example:
        >>> as_number(2, "cell_size_m")
        2.0
        >>> as_number(True, "cell_size_m")
        Traceback (most recent call last):
        ...
        mmplanner.core.exceptions.MapFormatError: cell_size_m: expected ... bool
    """
    if isinstance(value, bool) or not isinstance(value, int | float):
        raise MapFormatError(name, f"expected a number, got {type(value).__name__}")
    number = float(value)
    if not math.isfinite(number):
        raise MapFormatError(name, f"expected a finite number, got {value!r}")
    return number


def as_int(value: Any, name: str) -> int:
    """Coerce a JSON integer, rejecting booleans and fractional numbers."""
    if isinstance(value, bool) or not isinstance(value, int):
        raise MapFormatError(name, f"expected an integer, got {value!r}")
    return value


def as_cell(value: Any, name: str) -> CellIndex:
    """Read an ``[x, y]`` pair.

    Example:
        >>> as_cell([2, 3], "start")
        CellIndex(x=2, y=3)
    """
    if not isinstance(value, list | tuple) or len(value) != 2:
        raise MapFormatError(name, f"expected [x, y], got {value!r}")
    return CellIndex(as_int(value[0], name), as_int(value[1], name))


def as_point(value: Any, name: str) -> tuple[float, float]:
    """Read an ``[x, y]`` pair of meters."""
    if not isinstance(value, list | tuple) or len(value) != 2:
        raise MapFormatError(name, f"expected [x, y], got {value!r}")
    return as_number(value[0], name), as_number(value[1], name)


def as_list(value: Any, name: str) -> list[Any]:
    """Require a JSON array."""
    if not isinstance(value, list):
        raise MapFormatError(name, f"expected an array, got {type(value).__name__}")
    return value


def as_object(value: Any, name: str) -> dict[str, Any]:
    """Require a JSON object."""
    if not isinstance(value, dict):
        raise MapFormatError(name, f"expected an object, got {type(value).__name__}")
    return value
