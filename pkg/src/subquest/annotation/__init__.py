"""Teacher-driven trajectory annotation and dataset construction."""

from ..subgoals import SubGoal
from .alignment import (
    AnnotatedTrajectory,
    EditOp,
    EditScript,
    Gap,
    SubGoalSegment,
    annotate,
    apply_removals,
    edit_script,
    fill_gaps,
    gap_groups,
)
from .dataset import read_dataset, write_dataset
from .pipeline import (
    AnnotationRunResult,
    annotate_split,
    annotate_variation,
    annotation_examples,
    gold_annotation,
    goal_for,
)
from .prompts import (
    ENV_PREAMBLE,
    AnnotationExample,
    build_annotation_prompt,
    parse_subgoal_response,
)
from .records import (
    ACTION_ROLE,
    SUBGOAL_ROLE,
    StepRecord,
    build_step_records,
    parse_record,
    serialize_record,
)
from .teacher import (
    ChatCompletionClient,
    CorruptionSpec,
    MockTeacher,
    RemoteTeacher,
    ScriptedOracleTeacher,
    TeacherBackend,
    TeacherRequest,
    TeacherResponse,
    teacher_complete,
)

__all__ = [
    "ACTION_ROLE",
    "SUBGOAL_ROLE",
    "AnnotatedTrajectory",
    "AnnotationExample",
    "AnnotationRunResult",
    "ChatCompletionClient",
    "CorruptionSpec",
    "ENV_PREAMBLE",
    "EditOp",
    "EditScript",
    "Gap",
    "MockTeacher",
    "RemoteTeacher",
    "ScriptedOracleTeacher",
    "StepRecord",
    "SubGoal",
    "SubGoalSegment",
    "TeacherBackend",
    "TeacherRequest",
    "TeacherResponse",
    "annotate",
    "annotate_split",
    "annotate_variation",
    "annotation_examples",
    "apply_removals",
    "build_annotation_prompt",
    "build_step_records",
    "edit_script",
    "fill_gaps",
    "gap_groups",
    "goal_for",
    "gold_annotation",
    "parse_record",
    "parse_subgoal_response",
    "read_dataset",
    "serialize_record",
    "teacher_complete",
    "write_dataset",
]
