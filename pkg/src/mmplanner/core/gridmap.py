"""2.5D height grid, traversal classification and the map file codec.

The world is a row-major raster of cell elevations. Whether a robot can
move between two adjacent cells depends only on their height difference
and the robot's thresholds: small steps are driven over, medium steps are
climbed face-on, tall steps are walls.

Example:
    >>> grid = HeightGrid.from_rows([[0.0, 0.3], [0.0, 0.0]])
    >>> profile = RobotProfile()
    >>> classify_transition(grid, CellIndex(0, 0), CellIndex(1, 0), profile)
    <TraversalClass.OVERCOME: 'overcome'>
    >>> [n.cell for n in neighbors(grid, CellIndex(0, 0), profile)]
    [CellIndex(x=1, y=0), CellIndex(x=0, y=1), CellIndex(x=1, y=1)]
"""

import json
import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from typing import NamedTuple

from mmplanner.core.encoding.fields import (
    as_int,
    as_list,
    as_number,
    parse_document,
    require,
)
from mmplanner.core.exceptions import (
    ConfigurationError,
    InputDomainError,
    MapFormatError,
)
from mmplanner.core.models import CellIndex, MoveKind, RobotProfile, TraversalClass

# Cardinal offsets first, then diagonals; neighbours are emitted in this order.
CARDINAL_OFFSETS: tuple[tuple[int, int], ...] = ((0, -1), (1, 0), (0, 1), (-1, 0))
DIAGONAL_OFFSETS: tuple[tuple[int, int], ...] = ((1, -1), (1, 1), (-1, 1), (-1, -1))
OFFSETS = CARDINAL_OFFSETS + DIAGONAL_OFFSETS


@dataclass(frozen=True)
class HeightGrid:
    """Immutable 2.5D elevation raster.

    Attributes:
        width: Number of columns.
        height: Number of rows.
        cell_size: Edge length of one cell in meters.
        heights: Row-major cell elevations in meters, row 0 at the top.

    Example:
        >>> grid = HeightGrid(width=2, height=1, cell_size=0.5, heights=(0.0, 1.0))
        >>> grid.height_at(CellIndex(1, 0))
        1.0
        >>> grid.cell_center(CellIndex(1, 0))
        (0.75, 0.25)
    """

    width: int
    height: int
    cell_size: float
    heights: tuple[float, ...]

    def __post_init__(self) -> None:
        """Validate dimensions and elevations."""
        if self.width < 1:
            raise ConfigurationError(f"width must be at least 1, got {self.width}")
        if self.height < 1:
            raise ConfigurationError(f"height must be at least 1, got {self.height}")
        if not math.isfinite(self.cell_size) or self.cell_size <= 0:
            raise ConfigurationError(
                f"cell_size must be positive, got {self.cell_size}"
            )
        expected = self.width * self.height
        if len(self.heights) != expected:
            raise ConfigurationError(
                f"heights must hold {expected} values, got {len(self.heights)}"
            )
        if not all(math.isfinite(h) for h in self.heights):
            raise ConfigurationError("heights must all be finite")
        # Normalise lists and ints so equality is field-for-field.
        object.__setattr__(self, "heights", tuple(float(h) for h in self.heights))

    @classmethod
    def from_rows(
        cls, rows: Sequence[Sequence[float]], cell_size: float = 1.0
    ) -> "HeightGrid":
        """Build a grid from a list of rows, top row first.

        Example:
            >>> HeightGrid.from_rows([[0, 1, 2]]).width
            3
        """
        if not rows or any(len(row) != len(rows[0]) for row in rows):
            raise ConfigurationError("rows must be non-empty and of equal length")
        return cls(
            width=len(rows[0]),
            height=len(rows),
            cell_size=cell_size,
            heights=tuple(float(h) for row in rows for h in row),
        )

    def contains(self, cell: CellIndex) -> bool:
        """Return True if the cell lies on the grid."""
        return 0 <= cell.x < self.width and 0 <= cell.y < self.height

    def index(self, cell: CellIndex) -> int:
        """Row-major index of a cell."""
        return cell.y * self.width + cell.x

    def height_at(self, cell: CellIndex) -> float:
        """Elevation of a cell in meters."""
        self.require(cell)
        return self.heights[self.index(cell)]

    def require(self, cell: CellIndex, name: str = "cell") -> None:
        """Raise InputDomainError unless the cell lies on the grid."""
        if not self.contains(cell):
            raise InputDomainError(
                f"{name} {tuple(cell)} is outside the {self.width}x{self.height} grid"
            )

    def cells(self) -> Iterator[CellIndex]:
        """Iterate over every cell in row-major order."""
        for y in range(self.height):
            for x in range(self.width):
                yield CellIndex(x, y)

    def cell_center(self, cell: CellIndex) -> tuple[float, float]:
        """World coordinates (meters) of a cell centre; y grows downwards."""
        return ((cell.x + 0.5) * self.cell_size, (cell.y + 0.5) * self.cell_size)

    def cell_at_point(self, x: float, y: float) -> CellIndex | None:
        """Cell containing a world point, or None when off the grid.

        Example:
            >>> grid = HeightGrid.from_rows([[0, 0], [0, 0]])
            >>> grid.cell_at_point(1.5, 0.2)
            CellIndex(x=1, y=0)
            >>> grid.cell_at_point(-0.1, 0.2) is None
            True
        """
        col = math.floor(x / self.cell_size)
        row = math.floor(y / self.cell_size)
        cell = CellIndex(col, row)
        return cell if self.contains(cell) else None


class Neighbor(NamedTuple):
    """An admissible step out of a cell."""

    cell: CellIndex
    kind: MoveKind
    traversal: TraversalClass


def move_kind(origin: CellIndex, target: CellIndex) -> MoveKind:
    """Classify the shape of a step between adjacent cells.

    Raises:
        InputDomainError: If the cells are identical or not adjacent.
    """
    dx, dy = abs(target.x - origin.x), abs(target.y - origin.y)
    if (dx, dy) in ((1, 0), (0, 1)):
        return MoveKind.CARDINAL
    if (dx, dy) == (1, 1):
        return MoveKind.DIAGONAL
    raise InputDomainError(
        f"cells {tuple(origin)} and {tuple(target)} are not adjacent"
    )


def is_surmountable(delta_h: float, profile: RobotProfile) -> bool:
    """Return True if a height change can be crossed, by driving or climbing.

    Example:
        >>> is_surmountable(0.5, RobotProfile())
        True
        >>> is_surmountable(-0.51, RobotProfile())
        False
        >>> is_surmountable(0.3, RobotProfile(overcome_enabled=False))
        False
    """
    step = abs(delta_h)
    if step == 0 or step < profile.max_direct_height:
        return True
    return profile.overcome_enabled and step <= profile.max_overcome_height


def _classify(delta_h: float, kind: MoveKind, profile: RobotProfile) -> TraversalClass:
    step = abs(delta_h)
    if step == 0 or step < profile.max_direct_height:
        return TraversalClass.DIRECT
    if step > profile.max_overcome_height:
        return TraversalClass.BLOCKED
    # Climbing needs a face-on approach.
    if kind is MoveKind.DIAGONAL or not profile.overcome_enabled:
        return TraversalClass.BLOCKED
    return TraversalClass.OVERCOME


def classify_transition(
    grid: HeightGrid,
    origin: CellIndex,
    target: CellIndex,
    profile: RobotProfile,
) -> TraversalClass:
    """Classify the step between two adjacent cells.

    Direct below ``max_direct_height``, Blocked above ``max_overcome_height``,
    Overcome in between (inclusive of the upper bound). Diagonal steps that
    would need overcoming are Blocked.

    Raises:
        InputDomainError: If either cell is off the grid or they are not
            adjacent.

    Example:
        >>> grid = HeightGrid.from_rows([[0.0, 0.3], [0.3, 0.0]])
        >>> p = RobotProfile()
        >>> classify_transition(grid, CellIndex(0, 0), CellIndex(1, 1), p)
        <TraversalClass.DIRECT: 'direct'>
        >>> classify_transition(grid, CellIndex(0, 1), CellIndex(1, 0), p)
        <TraversalClass.DIRECT: 'direct'>
        >>> classify_transition(grid, CellIndex(0, 0), CellIndex(0, 1), p)
        <TraversalClass.OVERCOME: 'overcome'>
    """
    grid.require(origin, "from")
    grid.require(target, "to")
    kind = move_kind(origin, target)
    delta_h = grid.height_at(target) - grid.height_at(origin)
    return _classify(delta_h, kind, profile)


def neighbors(grid: HeightGrid, at: CellIndex, profile: RobotProfile) -> list[Neighbor]:
    """List the non-Blocked steps out of a cell.

    Direct steps use the 8-neighbourhood, Overcome steps only the
    4-neighbourhood. Cardinal neighbours come first (N, E, S, W), then
    diagonals (NE, SE, SW, NW).

    Example:
        >>> flat = HeightGrid.from_rows([[0.0] * 3] * 3)
        >>> len(neighbors(flat, CellIndex(1, 1), RobotProfile()))
        8
        >>> len(neighbors(flat, CellIndex(0, 0), RobotProfile()))
        3
    """
    grid.require(at, "at")
    base = grid.heights[grid.index(at)]
    result: list[Neighbor] = []
    for offsets, kind in (
        (CARDINAL_OFFSETS, MoveKind.CARDINAL),
        (DIAGONAL_OFFSETS, MoveKind.DIAGONAL),
    ):
        for dx, dy in offsets:
            cell = CellIndex(at.x + dx, at.y + dy)
            if not grid.contains(cell):
                continue
            traversal = _classify(grid.heights[grid.index(cell)] - base, kind, profile)
            if traversal is not TraversalClass.BLOCKED:
                result.append(Neighbor(cell, kind, traversal))
    return result


def load_map(data: bytes | str) -> HeightGrid:
    """Parse a map document.

    The document holds ``width``, ``height``, ``cell_size_m`` and
    ``heights``: a flat row-major array (row 0 at the top), or a list of
    rows.

    Raises:
        MapFormatError: Naming the offending field.

    Example:
        >>> doc = b'{"width": 1, "height": 1, "cell_size_m": 1, "heights": [0]}'
        >>> grid = load_map(doc)
        >>> grid.heights
        (0.0,)
    """
    document = parse_document(data, "map")
    width = as_int(require(document, "width"), "width")
    height = as_int(require(document, "height"), "height")
    if width < 1:
        raise MapFormatError("width", f"must be at least 1, got {width}")
    if height < 1:
        raise MapFormatError("height", f"must be at least 1, got {height}")
    cell_size = as_number(require(document, "cell_size_m"), "cell_size_m")
    if cell_size <= 0:
        raise MapFormatError("cell_size_m", f"must be positive, got {cell_size}")
    raw = as_list(require(document, "heights"), "heights")
    if raw and all(isinstance(row, list) for row in raw):
        if len(raw) != height or any(len(row) != width for row in raw):
            raise MapFormatError(
                "heights", f"expected {height} rows of {width} values"
            )
        raw = [value for row in raw for value in row]
    if len(raw) != width * height:
        raise MapFormatError(
            "heights", f"expected {width * height} values, got {len(raw)}"
        )
    heights = tuple(as_number(value, "heights") for value in raw)
    return HeightGrid(width=width, height=height, cell_size=cell_size, heights=heights)


def save_map(grid: HeightGrid) -> bytes:
    """Serialize a grid to the map document format.

    Example:
        >>> grid = HeightGrid.from_rows([[0.0, 0.25]], cell_size=0.5)
        >>> load_map(save_map(grid)) == grid
        True
    """
    document = {
        "width": grid.width,
        "height": grid.height,
        "cell_size_m": grid.cell_size,
        "heights": list(grid.heights),
    }
    return (json.dumps(document) + "\n").encode("utf-8")
