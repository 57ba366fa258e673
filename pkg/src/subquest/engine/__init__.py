"""Deterministic desk-scale text-world engine."""

from .engine import Engine, stable_seed
from .expert import expert_trajectory, gold_segments
from .suite import get_task, load_task_suite, split_variations
from .types import (
    Action,
    EnvState,
    GoalDescription,
    Milestone,
    Observation,
    TaskSpec,
    TerminationReason,
    VariationSpec,
    VariationSplit,
)

__all__ = [
    "Action",
    "Engine",
    "EnvState",
    "GoalDescription",
    "Milestone",
    "Observation",
    "TaskSpec",
    "TerminationReason",
    "VariationSpec",
    "VariationSplit",
    "expert_trajectory",
    "get_task",
    "gold_segments",
    "load_task_suite",
    "split_variations",
    "stable_seed",
]
