"""Benchmark rows and their CSV format.

The column set is frozen; golden tests compare files column by column.
"""

import csv
import io
import math
from collections.abc import Iterable
from dataclasses import dataclass, replace

from mmplanner.core.exceptions import MapFormatError

CSV_COLUMNS = (
    "scenario_id",
    "strategy",
    "nodes_expanded",
    "nodes_generated",
    "path_steps",
    "total_time_s",
    "wall_clock_s",
    "outcome",
    "speedup_vs_abfs",
    "expansion_ratio",
    "seed",
)

OUTCOME_OK = "ok"
OUTCOME_NO_PATH = "no_path"


@dataclass(frozen=True)
class MetricsRow:
    """One (scenario, strategy) benchmark run.

    ``outcome`` is ``ok``, ``no_path``, ``delta`` (a cost differing from
    the oracle) or ``error: <message>``. Relative columns are filled in by
    ``with_relative`` against the Abfs row of the same scenario.
    """

    scenario_id: str
    strategy: str
    nodes_expanded: int = 0
    nodes_generated: int = 0
    path_steps: int = 0
    total_time_s: float = math.nan
    wall_clock_s: float = 0.0
    outcome: str = OUTCOME_OK
    speedup_vs_abfs: float = math.nan
    expansion_ratio: float = math.nan
    seed: int = 0

    @property
    def sort_key(self) -> tuple[str, str]:
        return (self.scenario_id, self.strategy)


def with_relative(rows: Iterable[MetricsRow]) -> list[MetricsRow]:
    """Sort rows canonically and add speedup and expansion ratios.

    ``speedup_vs_abfs`` is Abfs wall clock over the row's wall clock;
    ``expansion_ratio`` is the row's expansions over Abfs expansions.

    Example:
        >>> rows = with_relative([
        ...     MetricsRow("a", "gbfs", nodes_expanded=10, wall_clock_s=0.5),
        ...     MetricsRow("a", "abfs", nodes_expanded=40, wall_clock_s=2.0),
        ... ])
        >>> [(r.strategy, r.speedup_vs_abfs, r.expansion_ratio) for r in rows]
        [('abfs', 1.0, 1.0), ('gbfs', 4.0, 0.25)]
    """
    ordered = sorted(rows, key=lambda r: r.sort_key)
    baseline = {
        r.scenario_id: r
        for r in ordered
        if r.strategy == "abfs" and r.outcome == OUTCOME_OK
    }
    result = []
    for row in ordered:
        base = baseline.get(row.scenario_id)
        if base is None or row.outcome != OUTCOME_OK:
            result.append(row)
            continue
        speedup = (
            base.wall_clock_s / row.wall_clock_s if row.wall_clock_s > 0 else math.nan
        )
        ratio = (
            row.nodes_expanded / base.nodes_expanded
            if base.nodes_expanded > 0
            else math.nan
        )
        result.append(replace(row, speedup_vs_abfs=speedup, expansion_ratio=ratio))
    return result


def _cell(value: object) -> str:
    if isinstance(value, float):
        return "" if math.isnan(value) else repr(value)
    return str(value)


def encode_bench_csv(rows: Iterable[MetricsRow]) -> str:
    """Render rows as CSV with the frozen header.

    Example:
        >>> encode_bench_csv([]).split(",")[:3]
        ['scenario_id', 'strategy', 'nodes_expanded']
        >>> encode_bench_csv([MetricsRow("fig5", "abfs", seed=7)]).splitlines()[1]
        'fig5,abfs,0,0,0,,0.0,ok,,,7'
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([_cell(getattr(row, name)) for name in CSV_COLUMNS])
    return buffer.getvalue()


def _float(text: str, name: str) -> float:
    if text == "":
        return math.nan
    try:
        return float(text)
    except ValueError as e:
        raise MapFormatError(name, f"expected a number, got {text!r}") from e


def _int(text: str, name: str) -> int:
    try:
        return int(text)
    except ValueError as e:
        raise MapFormatError(name, f"expected an integer, got {text!r}") from e


def decode_bench_csv(text: str) -> list[MetricsRow]:
    """Parse a CSV written by ``encode_bench_csv``."""
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
        raise MapFormatError("header", f"expected columns {', '.join(CSV_COLUMNS)}")
    return [
        MetricsRow(
            scenario_id=raw["scenario_id"],
            strategy=raw["strategy"],
            nodes_expanded=_int(raw["nodes_expanded"], "nodes_expanded"),
            nodes_generated=_int(raw["nodes_generated"], "nodes_generated"),
            path_steps=_int(raw["path_steps"], "path_steps"),
            total_time_s=_float(raw["total_time_s"], "total_time_s"),
            wall_clock_s=_float(raw["wall_clock_s"], "wall_clock_s"),
            outcome=raw["outcome"],
            speedup_vs_abfs=_float(raw["speedup_vs_abfs"], "speedup_vs_abfs"),
            expansion_ratio=_float(raw["expansion_ratio"], "expansion_ratio"),
            seed=_int(raw["seed"], "seed"),
        )
        for raw in reader
    ]
