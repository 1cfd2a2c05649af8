"""Tests for the package docstring and public exports."""

import pytest

import mmplanner

pytestmark = pytest.mark.core


class TestModuleDocstring:
    """Tests that __init__.py docstring provides quickstart guidance."""

    def test_has_quickstart_section(self) -> None:
        """Docstring has a Quickstart section."""
        assert "quickstart" in (mmplanner.__doc__ or "").lower()

    @pytest.mark.parametrize(
        "snippet",
        ["load_map(", "plan(", "Strategy.MULTIMODAL", "track(", "InMemoryLogStorage"],
    )
    def test_shows_core_workflow(self, snippet: str) -> None:
        """Docstring walks through loading, planning, tracking and logging."""
        assert snippet in (mmplanner.__doc__ or "")

    def test_names_the_cli_commands(self) -> None:
        """Docstring points at the command line."""
        docstring = mmplanner.__doc__ or ""
        for command in ("plan", "simulate", "bench", "oracle", "render"):
            assert f"``{command}" in docstring or f"{command}``" in docstring


class TestExports:
    """Tests for the public API surface."""

    def test_all_names_resolve(self) -> None:
        """Every name in __all__ is importable from the package."""
        missing = [name for name in mmplanner.__all__ if not hasattr(mmplanner, name)]
        assert missing == []

    def test_no_duplicates(self) -> None:
        """__all__ lists each name once."""
        assert len(mmplanner.__all__) == len(set(mmplanner.__all__))

    @pytest.mark.parametrize(
        "name", ["plan", "track", "dwa_step", "oracle_plan", "run_bench", "HeightGrid"]
    )
    def test_operations_are_exported(self, name: str) -> None:
        """The main operations are part of the public API."""
        assert name in mmplanner.__all__
