"""Shared test fixtures for all test modules."""

import logging
from collections.abc import Callable, Generator
from pathlib import Path

import pytest

from mmplanner.adapters.files import read_scenario
from mmplanner.adapters.logging import install_handler, remove_handler
from mmplanner.adapters.logging_context import clear_log_context, get_log_context
from mmplanner.adapters.storage import InMemoryLogStorage, InMemoryMetricsStorage
from mmplanner.core.gridmap import HeightGrid
from mmplanner.core.models import RobotProfile
from mmplanner.core.scenario import Scenario

FIXTURES_DIR = Path(__file__).resolve().parent.parent / "fixtures"

CURATED = ("fig2a", "fig2b", "fig3a", "fig3b", "fig4a", "fig4b", "fig5", "factory")


@pytest.fixture
def fixtures_dir() -> Path:
    """Directory holding the curated scenario suite."""
    return FIXTURES_DIR


@pytest.fixture
def load_fixture() -> Callable[[str], tuple[Scenario, HeightGrid]]:
    """Factory loading one curated fixture by name."""

    def load(name: str) -> tuple[Scenario, HeightGrid]:
        return read_scenario(FIXTURES_DIR / name / "scenario.json")

    return load


@pytest.fixture
def profile() -> RobotProfile:
    """Default robot profile."""
    return RobotProfile()


@pytest.fixture
def flat_grid() -> HeightGrid:
    """A flat 5x5 grid with 1 m cells."""
    return HeightGrid.from_rows([[0.0] * 5 for _ in range(5)])


@pytest.fixture
def log_storage() -> Generator[InMemoryLogStorage]:
    """Capture package logs at DEBUG level for the duration of a test."""
    storage = InMemoryLogStorage()
    handler = install_handler(storage, "DEBUG", context_provider=get_log_context)
    yield storage
    remove_handler(handler)
    clear_log_context()


@pytest.fixture
def metrics_storage() -> InMemoryMetricsStorage:
    """Empty in-memory metric sink."""
    return InMemoryMetricsStorage()


@pytest.fixture(autouse=True)
def _reset_package_logger() -> Generator[None]:
    """Leave the package logger as each test found it."""
    logger = logging.getLogger("mmplanner")
    handlers, level, propagate = list(logger.handlers), logger.level, logger.propagate
    yield
    logger.handlers[:] = handlers
    logger.setLevel(level)
    logger.propagate = propagate
