"""SVG rendering of maps, search footprints, paths and trajectories.

Cells are shaded by height (darker is higher), searched cells are tinted
green, the global path is a red polyline through cell centres and the
executed trajectory a blue one. Output depends only on the inputs.
"""

from collections.abc import Iterable, Sequence

from mmplanner.core.dwa import DiscObstacle
from mmplanner.core.gridmap import HeightGrid
from mmplanner.core.models import CellIndex
from mmplanner.core.planner.results import PlanResult
from mmplanner.core.scenario import ExecutionLog

# Pixels per cell edge.
DEFAULT_SCALE = 24

PATH_COLOUR = "#d62728"
TRAJECTORY_COLOUR = "#1f77b4"
SEARCHED_COLOUR = "#2ca02c"
OBSTACLE_COLOUR = "#ff7f0e"


def _num(value: float) -> str:
    text = f"{value:.2f}".rstrip("0").rstrip(".")
    return "0" if text == "-0" else text


def _shade(height: float, low: float, high: float) -> str:
    if high <= low:
        level = 255
    else:
        level = 255 - round(175 * (height - low) / (high - low))
    return f"#{level:02x}{level:02x}{level:02x}"


def render_svg(
    grid: HeightGrid,
    plan: PlanResult | None = None,
    log: ExecutionLog | None = None,
    searched: Iterable[CellIndex] | None = None,
    obstacles: Sequence[DiscObstacle] = (),
    scale: int = DEFAULT_SCALE,
) -> bytes:
    """Render a map with optional overlays.

    Args:
        grid: Map to draw.
        plan: Global path to draw as a polyline.
        log: Execution log whose trajectory is drawn.
        searched: Expanded cells to tint; defaults to nothing.
        obstacles: Discs to draw (for example unknown obstacles at t = 0).
        scale: Pixels per cell.

    Example:
        >>> svg = render_svg(HeightGrid.from_rows([[0.0]]))
        >>> svg.count(b"<rect")
        1
        >>> svg == render_svg(HeightGrid.from_rows([[0.0]]))
        True
    """
    px = scale / grid.cell_size
    width, height = grid.width * scale, grid.height * scale
    low, high = min(grid.heights), max(grid.heights)
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        '<g id="cells">',
    ]
    for cell in grid.cells():
        fill = _shade(grid.heights[grid.index(cell)], low, high)
        parts.append(
            f'<rect x="{cell.x * scale}" y="{cell.y * scale}" width="{scale}" '
            f'height="{scale}" fill="{fill}"/>'
        )
    parts.append("</g>")

    if searched is not None:
        parts.append('<g id="searched">')
        for cell in searched:
            parts.append(
                f'<rect x="{cell.x * scale}" y="{cell.y * scale}" width="{scale}" '
                f'height="{scale}" fill="{SEARCHED_COLOUR}" fill-opacity="0.35"/>'
            )
        parts.append("</g>")

    if obstacles:
        parts.append('<g id="obstacles">')
        for ob in obstacles:
            parts.append(
                f'<circle cx="{_num(ob.x * px)}" cy="{_num(ob.y * px)}" '
                f'r="{_num(ob.radius * px)}" fill="{OBSTACLE_COLOUR}"/>'
            )
        parts.append("</g>")

    if plan is not None:
        points = " ".join(
            f"{_num((c.x + 0.5) * scale)},{_num((c.y + 0.5) * scale)}"
            for c in plan.path
        )
        parts.append(
            f'<polyline id="path" points="{points}" fill="none" '
            f'stroke="{PATH_COLOUR}" stroke-width="2"/>'
        )

    if log is not None and log.trajectory:
        points = " ".join(
            f"{_num(s[1] * px)},{_num(s[2] * px)}" for s in log.trajectory
        )
        parts.append(
            f'<polyline id="trajectory" points="{points}" fill="none" '
            f'stroke="{TRAJECTORY_COLOUR}" stroke-width="1.5"/>'
        )

    parts.append("</svg>")
    return ("\n".join(parts) + "\n").encode("utf-8")
