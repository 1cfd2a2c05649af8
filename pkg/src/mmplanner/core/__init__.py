"""Core domain: grid, cost model, planners, local planner and codecs."""

from mmplanner.core.exceptions import ConfigurationError, PlannerError

__all__ = ["ConfigurationError", "PlannerError"]
