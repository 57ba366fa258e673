"""Trajectory alignment: repair teacher segmentations against the expert.

The teacher's segmentation may include superfluous actions or miss some.
A minimal insert/delete edit script (substitutions cost two, so matches are
maximized) maps the generated action sequence onto the expert sequence:
removals are dropped from their segments, and runs of missing actions become
gaps the teacher is re-prompted to name, with a bounded attempt budget and a
merge fallback so the output always concatenates exactly to the expert.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from ..errors import AnnotationError, RecordParseError, TeacherTransportError
from ..subgoals import SubGoal
from .prompts import ENV_PREAMBLE, build_annotation_prompt, parse_subgoal_response
from .teacher import TeacherBackend, teacher_complete

logger = logging.getLogger(__name__)

KEEP = "keep"
REMOVE = "remove"
ADD = "add"


@dataclass(frozen=True)
class EditOp:
    kind: str
    gen_index: int | None
    expert_index: int | None


@dataclass(frozen=True)
class EditScript:
    ops: tuple[EditOp, ...]

    @property
    def cost(self) -> int:
        return sum(1 for op in self.ops if op.kind != KEEP)

    def apply(self, generated: list[str], expert: list[str]) -> list[str]:
        """Replay the script over `generated`; the result must equal `expert`."""
        out: list[str] = []
        for op in self.ops:
            if op.kind == KEEP:
                out.append(generated[op.gen_index])
            elif op.kind == ADD:
                out.append(expert[op.expert_index])
        return out


def edit_script(generated: list[str], expert: list[str]) -> EditScript:
    """Minimal insert/delete edit script from `generated` to `expert`.

    Actions compare as atomic tokens by exact surface equality. Ties are
    broken keep > remove > add at each cell, giving one canonical script.
    """
    m, n = len(generated), len(expert)
    # dp[i][j] = cost to turn generated[i:] into expert[j:]
    dp = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(m + 1):
        dp[i][n] = m - i
    for j in range(n + 1):
        dp[m][j] = n - j
    for i in range(m - 1, -1, -1):
        row, below = dp[i], dp[i + 1]
        for j in range(n - 1, -1, -1):
            best = min(below[j] + 1, row[j + 1] + 1)
            if generated[i] == expert[j] and below[j + 1] < best:
                best = below[j + 1]
            row[j] = best

    ops: list[EditOp] = []
    i = j = 0
    while i < m or j < n:
        if (
            i < m
            and j < n
            and generated[i] == expert[j]
            and dp[i][j] == dp[i + 1][j + 1]
        ):
            ops.append(EditOp(KEEP, i, j))
            i += 1
            j += 1
        elif i < m and dp[i][j] == dp[i + 1][j] + 1:
            ops.append(EditOp(REMOVE, i, None))
            i += 1
        else:
            ops.append(EditOp(ADD, None, j))
            j += 1
    return EditScript(tuple(ops))


@dataclass
class SubGoalSegment:
    subgoal: SubGoal
    actions: list[str]


@dataclass
class AnnotatedTrajectory:
    """A teacher segmentation repaired so segment actions concatenate to the
    expert trajectory exactly."""

    task_type_id: str
    variation_id: int
    task_text: str
    segments: list[SubGoalSegment]
    expert: list[str]
    fallback_count: int = 0
    teacher_calls: int = 1

    def concatenation(self) -> list[str]:
        return [a for seg in self.segments for a in seg.actions]


def apply_removals(segments: list[SubGoalSegment], script: EditScript) -> list[SubGoalSegment]:
    """Delete every remove-indexed action from its segment; empty segments
    are dropped, relative order preserved."""
    removed = {op.gen_index for op in script.ops if op.kind == REMOVE}
    out: list[SubGoalSegment] = []
    index = 0
    for segment in segments:
        kept = []
        for action in segment.actions:
            if index not in removed:
                kept.append(action)
            index += 1
        if kept:
            out.append(SubGoalSegment(segment.subgoal, kept))
    return out


@dataclass(frozen=True)
class Gap:
    expert_span: tuple[int, int]
    insert_after_segment_index: int


def _expert_assignment(script: EditScript, segments: list[SubGoalSegment]) -> list[int]:
    """Map each expert index to the post-removal segment owning it, or -1
    for indices only reachable through add ops (gap members)."""
    seg_of_kept: list[int] = []
    for idx, segment in enumerate(segments):
        seg_of_kept.extend([idx] * len(segment.actions))
    n = max((op.expert_index for op in script.ops if op.expert_index is not None), default=-1) + 1
    assignment = [-1] * n
    kept = 0
    for op in script.ops:
        if op.kind == KEEP:
            assignment[op.expert_index] = seg_of_kept[kept]
            kept += 1
    return assignment


def gap_groups(script: EditScript, segments: list[SubGoalSegment]) -> list[Gap]:
    """Group maximal runs of consecutive add ops into gaps, each anchored to
    the post-removal segment owning the expert action just before the run
    (-1 when the gap opens the trajectory)."""
    assignment = _expert_assignment(script, segments)
    gaps: list[Gap] = []
    run_start: int | None = None
    for j, owner in enumerate(assignment):
        if owner == -1:
            if run_start is None:
                run_start = j
            continue
        if run_start is not None:
            gaps.append(Gap((run_start, j - 1), assignment[run_start - 1] if run_start else -1))
            run_start = None
    if run_start is not None:
        gaps.append(Gap((run_start, len(assignment) - 1), assignment[run_start - 1] if run_start else -1))
    return gaps


def _gap_examples(examples) -> list:
    """Slice each worked example down to its first segment so the in-context
    shots match the gap's single-sub-goal shape."""
    sliced = []
    for example in examples:
        subgoal, actions = example.segments[0]
        sliced.append(
            type(example)(
                description=example.description,
                expert=tuple(actions),
                segments=((subgoal, tuple(actions)),),
            )
        )
    return sliced


def fill_gaps(
    segments: list[SubGoalSegment],
    gaps: list[Gap],
    teacher: TeacherBackend,
    max_attempts: int = 10,
    *,
    goal_text: str,
    task_type_id: str,
    expert: list[str],
    examples,
) -> tuple[list[SubGoalSegment], int, int]:
    """Name each gap via the teacher and splice it in at its boundary.

    Re-prompts share one budget across the task; once it runs out, a gap's
    actions merge into the preceding segment (or the following one when the
    gap opens the trajectory). Returns (segments, fallback_count, calls_made).
    """
    if max_attempts < 0:
        raise ValueError("max_attempts must be >= 0")
    if not gaps:
        return segments, 0, 0
    gap_shots = _gap_examples(examples)
    budget = max_attempts
    calls = 0
    fallback_count = 0

    # Entities over expert indices: ("seg", i) for kept actions, gaps filled
    # in below with a name, a neighbour merge, or a synthetic segment.
    entity: list[tuple[str, int] | None] = [None] * len(expert)
    in_gap = [False] * len(expert)
    for gap in gaps:
        for j in range(gap.expert_span[0], gap.expert_span[1] + 1):
            in_gap[j] = True
    flat = [("seg", i) for i, segment in enumerate(segments) for _ in segment.actions]
    kept = 0
    for j in range(len(expert)):
        if not in_gap[j]:
            entity[j] = flat[kept]
            kept += 1

    names: dict[int, SubGoal] = {}
    for g, gap in enumerate(gaps):
        start, end = gap.expert_span
        gap_actions = expert[start:end + 1]
        while budget > 0:
            budget -= 1
            calls += 1
            request = build_annotation_prompt(ENV_PREAMBLE, gap_shots, (goal_text, gap_actions))
            try:
                response = teacher_complete(request, teacher)
                parsed = parse_subgoal_response(response.text)
            except RecordParseError:
                continue
            except TeacherTransportError as exc:
                raise AnnotationError(f"teacher unreachable while filling a gap: {exc}") from exc
            names[g] = parsed[0][0]
            break

    for g, gap in enumerate(gaps):
        start, end = gap.expert_span
        if g in names:
            fill: tuple[str, int] = ("gap", g)
        elif start > 0:
            fallback_count += 1
            fill = entity[start - 1]
        elif end + 1 < len(expert):
            fallback_count += 1
            fill = entity[end + 1]
        else:
            fallback_count += 1
            fill = ("synthetic", 0)
        for j in range(start, end + 1):
            entity[j] = fill

    rebuilt: list[SubGoalSegment] = []
    previous: object = None
    for j in range(len(expert)):
        ent = entity[j]
        if rebuilt and ent == previous:
            rebuilt[-1].actions.append(expert[j])
        else:
            if ent[0] == "seg":
                subgoal = segments[ent[1]].subgoal
            elif ent[0] == "gap":
                subgoal = names[ent[1]]
            else:
                subgoal = SubGoal("complete_task", (task_type_id,))
            rebuilt.append(SubGoalSegment(subgoal, [expert[j]]))
        previous = ent
    return rebuilt, fallback_count, calls


def annotate(
    goal,
    expert: list[str],
    teacher: TeacherBackend,
    examples,
    budget: int = 10,
) -> AnnotatedTrajectory:
    """Run the full distillation repair loop for one (task, variation).

    One initial teacher query, then at most `budget` re-prompts shared
    between unparseable responses and gap naming. The result always
    satisfies concatenation(segments) == expert.
    """
    if not expert:
        raise ValueError("expert trajectory must be non-empty")
    request = build_annotation_prompt(ENV_PREAMBLE, examples, (goal.text, expert))
    reprompts = 0
    calls = 0
    while True:
        calls += 1
        try:
            response = teacher_complete(request, teacher)
        except TeacherTransportError as exc:
            raise AnnotationError(
                f"teacher unreachable for {goal.task_type_id} v{goal.variation_id}: {exc}"
            ) from exc
        try:
            parsed = parse_subgoal_response(response.text)
            break
        except RecordParseError as exc:
            reprompts += 1
            if reprompts > budget:
                raise AnnotationError(
                    f"no parseable annotation for {goal.task_type_id} "
                    f"v{goal.variation_id} within {budget} re-prompts"
                ) from exc

    segments = [SubGoalSegment(subgoal, list(actions)) for subgoal, actions in parsed]
    generated = [a for segment in segments for a in segment.actions]
    script = edit_script(generated, expert)
    trimmed = apply_removals(segments, script)
    gaps = gap_groups(script, trimmed)
    repaired, fallback_count, gap_calls = fill_gaps(
        trimmed,
        gaps,
        teacher,
        budget - reprompts,
        goal_text=goal.text,
        task_type_id=goal.task_type_id,
        expert=expert,
        examples=examples,
    )
    calls += gap_calls

    result = AnnotatedTrajectory(
        task_type_id=goal.task_type_id,
        variation_id=goal.variation_id,
        task_text=goal.text,
        segments=repaired,
        expert=list(expert),
        fallback_count=fallback_count,
        teacher_calls=calls,
    )
    assert result.concatenation() == list(expert), "alignment postcondition violated"
    return result
