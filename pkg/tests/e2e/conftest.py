"""Shared fixtures for E2E tests.

This module imports fixture plugins organized by concern:
- fixtures_cli: in-process runner for the ``mmplanner`` command
"""

# Import fixture modules to register fixtures with pytest
from tests.e2e.fixtures_cli import *  # noqa: F403
