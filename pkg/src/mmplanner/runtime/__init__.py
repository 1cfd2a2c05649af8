"""Runtime components: closed-loop executor and benchmark runners."""

from mmplanner.runtime.bench import (
    BenchResult,
    BenchRunner,
    VerifyReport,
    compare_baseline,
    run_bench,
    run_verify,
    verify_random,
)
from mmplanner.runtime.mmp import (
    build_obstacle_overlay,
    mask_obstacles,
    replan_check,
    track,
)

__all__ = [
    "BenchResult",
    "BenchRunner",
    "VerifyReport",
    "build_obstacle_overlay",
    "compare_baseline",
    "mask_obstacles",
    "replan_check",
    "run_bench",
    "run_verify",
    "track",
    "verify_random",
]
