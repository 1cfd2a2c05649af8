"""BDD step definitions for command-line features."""

from dataclasses import dataclass, field
from pathlib import Path

import pytest
from pytest_bdd import given, parsers, then, when

from mmplanner.cli import main

FIXTURES_DIR = Path(__file__).resolve().parents[3] / "fixtures"


# === Scenario Context ===


@dataclass
class ScenarioContext:
    """Shared state between steps in a scenario."""

    scenario_path: Path | None = None
    extra_args: list[str] = field(default_factory=list)
    exit_code: int | None = None
    stdout: str = ""
    stderr: str = ""


@pytest.fixture
def ctx() -> ScenarioContext:
    """Fresh scenario context for each test."""
    return ScenarioContext()


# === Given Steps ===


@given(parsers.parse('the curated fixture "{name}"'))
def given_curated_fixture(ctx: ScenarioContext, name: str) -> None:
    """Point the scenario at one of the curated fixtures."""
    ctx.scenario_path = FIXTURES_DIR / name / "scenario.json"


@given("a scenario path that does not exist")
def given_missing_scenario(ctx: ScenarioContext, tmp_path: Path) -> None:
    """Point the scenario at a file that was never written."""
    ctx.scenario_path = tmp_path / "absent" / "scenario.json"


# === When Steps ===


def _run(
    ctx: ScenarioContext,
    capsys: pytest.CaptureFixture[str],
    command: str,
    *extra: str,
) -> None:
    capsys.readouterr()
    argv = [command, "--scenario", str(ctx.scenario_path), *extra]
    try:
        ctx.exit_code = main(argv)
    except SystemExit as e:
        ctx.exit_code = int(e.code or 0)
    ctx.stdout, ctx.stderr = capsys.readouterr()


@when(parsers.parse('I run "{command}" on the fixture'))
def when_run_command(
    ctx: ScenarioContext, capsys: pytest.CaptureFixture[str], command: str
) -> None:
    """Run a command against the scenario."""
    _run(ctx, capsys, command)


@when(parsers.parse('I run "{command}" on the fixture with "{flag}"'))
def when_run_command_with_flag(
    ctx: ScenarioContext,
    capsys: pytest.CaptureFixture[str],
    command: str,
    flag: str,
) -> None:
    """Run a command with one extra flag."""
    _run(ctx, capsys, command, flag)


# === Then Steps ===


@then(parsers.parse("the exit code is {code:d}"))
def then_exit_code(ctx: ScenarioContext, code: int) -> None:
    """Check the process exit code."""
    assert ctx.exit_code == code


@then(parsers.parse('the output mentions "{text}"'))
def then_output_mentions(ctx: ScenarioContext, text: str) -> None:
    """Check standard output."""
    assert text in ctx.stdout


@then(parsers.parse('the errors mention "{text}"'))
def then_errors_mention(ctx: ScenarioContext, text: str) -> None:
    """Check standard error."""
    assert text in ctx.stderr
