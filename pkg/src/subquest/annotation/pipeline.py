"""High-level annotation runs over a task suite."""

from __future__ import annotations

import logging
from dataclasses import dataclass

from ..engine.engine import Engine
from ..engine.expert import expert_trajectory, gold_segments
from ..engine.suite import split_variations, substitute
from ..engine.types import GoalDescription, TaskSpec
from ..errors import AnnotationError
from .alignment import AnnotatedTrajectory, SubGoalSegment, annotate
from .prompts import AnnotationExample
from .teacher import TeacherBackend

logger = logging.getLogger(__name__)

DEFAULT_SEED = 0
DEFAULT_BUDGET = 10


def goal_for(task: TaskSpec, variation_id: int) -> GoalDescription:
    return GoalDescription(
        task_type_id=task.task_type_id,
        variation_id=variation_id,
        text=substitute(task.description_template, task.variations[variation_id].params),
    )


def gold_annotation(engine: Engine, task: TaskSpec, variation_id: int) -> AnnotatedTrajectory:
    """The suite's own segmentation, bypassing any teacher."""
    trajectory = expert_trajectory(engine, task, variation_id)
    segments = [
        SubGoalSegment(subgoal, list(actions))
        for subgoal, actions in gold_segments(trajectory)
    ]
    goal = goal_for(task, variation_id)
    return AnnotatedTrajectory(
        task_type_id=task.task_type_id,
        variation_id=variation_id,
        task_text=goal.text,
        segments=segments,
        expert=[a.surface for a, _ in trajectory],
        teacher_calls=0,
    )


def annotation_examples(engine: Engine, task: TaskSpec) -> list[AnnotationExample]:
    """Two in-context shots for a task: the gold-annotated train variations
    of the same type with the shortest expert trajectories."""
    split = split_variations(task)
    candidates = []
    for vid in split.train:
        annotated = gold_annotation(engine, task, vid)
        candidates.append((len(annotated.expert), vid, annotated))
    candidates.sort(key=lambda item: (item[0], item[1]))
    shots = []
    for _, _, annotated in candidates[:2]:
        shots.append(
            AnnotationExample(
                description=annotated.task_text,
                expert=tuple(annotated.expert),
                segments=tuple(
                    (segment.subgoal, tuple(segment.actions)) for segment in annotated.segments
                ),
            )
        )
    if len(shots) < 2:
        raise AnnotationError(
            f"task {task.task_type_id!r} has fewer than 2 train variations for examples"
        )
    return shots


def annotate_variation(
    engine: Engine,
    task: TaskSpec,
    variation_id: int,
    teacher: TeacherBackend,
    budget: int = DEFAULT_BUDGET,
) -> AnnotatedTrajectory:
    trajectory = expert_trajectory(engine, task, variation_id)
    expert = [a.surface for a, _ in trajectory]
    examples = annotation_examples(engine, task)
    return annotate(goal_for(task, variation_id), expert, teacher, examples, budget=budget)


@dataclass
class AnnotationRunResult:
    annotations: list[AnnotatedTrajectory]
    failures: list[tuple[str, int, str]]

    @property
    def total_teacher_calls(self) -> int:
        return sum(a.teacher_calls for a in self.annotations)

    @property
    def total_retries(self) -> int:
        return sum(max(0, a.teacher_calls - 1) for a in self.annotations)


def annotate_split(
    engine: Engine,
    teacher: TeacherBackend,
    split_name: str = "train",
    budget: int = DEFAULT_BUDGET,
    task_types: list[str] | None = None,
) -> AnnotationRunResult:
    """Annotate every variation of the chosen split, collecting failures
    instead of aborting the run."""
    annotations: list[AnnotatedTrajectory] = []
    failures: list[tuple[str, int, str]] = []
    for task in engine.suite:
        if task_types is not None and task.task_type_id not in task_types:
            continue
        for vid in split_variations(task).for_name(split_name):
            try:
                annotations.append(annotate_variation(engine, task, vid, teacher, budget))
            except AnnotationError as exc:
                logger.warning("annotation failed for %s v%d: %s", task.task_type_id, vid, exc)
                failures.append((task.task_type_id, vid, str(exc)))
    return AnnotationRunResult(annotations, failures)
