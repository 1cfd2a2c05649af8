"""Global planners over the height grid."""

from mmplanner.core.planner.oracle import ORACLE_LABEL, oracle_plan
from mmplanner.core.planner.results import (
    NoPath,
    PathStep,
    PlannerConfig,
    PlanResult,
    SearchNode,
    SearchStats,
    StepMode,
    Strategy,
    describe_path,
    reconstruct_path,
)
from mmplanner.core.planner.search import check_transitions, plan
from mmplanner.core.planner.wallfollow import (
    Episode,
    ObstacleBoundary,
    wall_follow_episode,
)

__all__ = [
    # Planning
    "plan",
    "oracle_plan",
    "wall_follow_episode",
    "reconstruct_path",
    "describe_path",
    "check_transitions",
    # Types
    "Strategy",
    "StepMode",
    "SearchNode",
    "SearchStats",
    "PathStep",
    "PlanResult",
    "NoPath",
    "PlannerConfig",
    "ObstacleBoundary",
    "Episode",
    "ORACLE_LABEL",
]
