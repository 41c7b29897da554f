"""Python bindings for the cubekb solver, plan compiler and motion planner."""

from ._core import (
    CubekbError,
    apply,
    campaign,
    compile_plan,
    plan_subtask,
    plan_text,
    reduction,
    scramble,
    solve,
    solved,
    step_stats,
    trace,
    validate,
    verify,
)

__all__ = [
    "CubekbError",
    "apply",
    "campaign",
    "compile_plan",
    "plan_subtask",
    "plan_text",
    "reduction",
    "scramble",
    "solve",
    "solved",
    "step_stats",
    "trace",
    "validate",
    "verify",
]
