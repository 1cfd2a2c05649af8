"""Flat-file IO for maps, scenarios, plans, logs and suites."""

from pathlib import Path

from mmplanner.core.encoding.bench_csv import MetricsRow, decode_bench_csv
from mmplanner.core.encoding.documents import load_log, load_plan, load_scenario
from mmplanner.core.exceptions import InputDomainError
from mmplanner.core.gridmap import HeightGrid, load_map
from mmplanner.core.planner.results import NoPath, PlanResult
from mmplanner.core.scenario import ExecutionLog, Scenario

SCENARIO_FILE = "scenario.json"
SCENARIO_SUFFIX = ".scenario.json"


def read_bytes(path: str | Path) -> bytes:
    """Read a file, reporting a missing or unreadable one as an input error."""
    try:
        return Path(path).read_bytes()
    except FileNotFoundError as e:
        raise InputDomainError(f"file not found: {path}") from e
    except OSError as e:
        raise InputDomainError(f"cannot read {path}: {e.strerror}") from e


def write_bytes(path: str | Path, data: bytes) -> Path:
    """Write a file, creating parent directories.

    An unwritable target is reported as an input error.
    """
    target = Path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_bytes(data)
    except OSError as e:
        raise InputDomainError(f"cannot write {path}: {e.strerror}") from e
    return target


def read_map(path: str | Path) -> HeightGrid:
    """Load a map file."""
    return load_map(read_bytes(path))


def scenario_id_for(path: Path) -> str:
    """Default scenario id: the fixture directory or the file stem.

    Example:
        >>> scenario_id_for(Path("fixtures/fig5/scenario.json"))
        'fig5'
        >>> scenario_id_for(Path("suite/corridor.scenario.json"))
        'corridor'
    """
    if path.name == SCENARIO_FILE:
        return path.parent.name
    if path.name.endswith(SCENARIO_SUFFIX):
        return path.name.removesuffix(SCENARIO_SUFFIX)
    return path.stem


def read_scenario(
    path: str | Path, map_path: str | Path | None = None
) -> tuple[Scenario, HeightGrid]:
    """Load a scenario and the map it refers to.

    Args:
        path: Scenario file.
        map_path: Overrides the scenario's ``map`` entry. A relative ``map``
            entry is resolved against the scenario file's directory.
    """
    source = Path(path)
    scenario = load_scenario(read_bytes(source), default_id=scenario_id_for(source))
    if map_path is None:
        map_path = source.parent / scenario.map_ref
    return scenario, read_map(map_path)


def read_plan(path: str | Path) -> PlanResult | NoPath:
    """Load a plan file."""
    return load_plan(read_bytes(path))


def read_log(path: str | Path) -> ExecutionLog:
    """Load an execution log file."""
    return load_log(read_bytes(path))


def discover_suite(directory: str | Path) -> list[Path]:
    """Scenario files of a suite, sorted by path.

    A suite holds one sub-directory per fixture with a ``scenario.json``,
    and/or loose ``*.scenario.json`` files.
    """
    root = Path(directory)
    if not root.is_dir():
        raise InputDomainError(f"suite directory not found: {directory}")
    found = {*root.glob(f"*/{SCENARIO_FILE}"), *root.glob(f"*{SCENARIO_SUFFIX}")}
    return sorted(found)


def read_bench_csv(path: str | Path) -> list[MetricsRow]:
    """Load a CSV written by ``bench --csv``."""
    return decode_bench_csv(read_bytes(path).decode("utf-8"))
