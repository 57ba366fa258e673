"""Supervised step records and their normative text serialization.

One record per expert action. The input side carries the task description,
step index, score, sub-goal context, a sliding window of the ten most recent
action/observation pairs, and the current room/inventory/visited renders.
Targets are the next action and the next sub-goal. The same serializer backs
both dataset construction and agent prompting, so training inputs and
inference prompts are byte-identical.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..engine.engine import Engine
from ..engine.types import ensure_text_fits
from ..errors import DataError, RecordParseError
from ..subgoals import NONE_SENTINEL, SubGoal, render_subgoal
from .alignment import AnnotatedTrajectory

HISTORY_WINDOW = 10

ACTION_ROLE = "action"
SUBGOAL_ROLE = "subgoal"

ACTION_QUESTION = "What action should you do next? </s>"
SUBGOAL_QUESTION = "What subtask should you do next? </s>"


@dataclass
class StepRecord:
    task_desc: str
    time: int
    score: int
    completed_subgoals: list[SubGoal]
    current_subgoal: SubGoal | None
    prev_completed_subgoals: list[SubGoal]
    prev_subgoal: SubGoal | None
    history: list[tuple[str, int, str]]
    room_text: str
    inventory_text: str
    visited_text: str
    target_action: str | None = None
    target_subgoal: SubGoal | None = None
    task_type: str = ""
    variation: int = 0

    def __post_init__(self) -> None:
        if len(self.history) > HISTORY_WINDOW:
            raise ValueError(f"history holds {len(self.history)} entries, max {HISTORY_WINDOW}")


def _subgoal_list(subgoals: list[SubGoal]) -> str:
    if not subgoals:
        return NONE_SENTINEL
    return ", ".join(sg.surface for sg in subgoals)


def _delta_str(delta: int) -> str:
    return f"+{delta}" if delta >= 0 else str(delta)


def _history_str(history: list[tuple[str, int, str]]) -> str:
    window = history[-HISTORY_WINDOW:]
    parts = []
    for ago, (action, delta, obs) in zip(range(len(window), 0, -1), window):
        shown = "N/A" if action == "look around" else obs
        parts.append(f"<extra_id_{ago}> {action} ({_delta_str(delta)}) --> {shown} | ")
    return "".join(parts)


def serialize_record(record: StepRecord, role: str) -> tuple[str, str]:
    """Render (input_text, target_text) for the given generator role."""
    if role == ACTION_ROLE:
        context = (
            f"Completed subtasks are: {_subgoal_list(record.completed_subgoals)}. "
            f"The current subtask is {render_subgoal(record.current_subgoal)};"
        )
        question = ACTION_QUESTION
        target = record.target_action or ""
    elif role == SUBGOAL_ROLE:
        context = (
            f"The previous subtasks are: {_subgoal_list(record.prev_completed_subgoals)}. "
            f"The current subtask is {render_subgoal(record.prev_subgoal)};"
        )
        question = SUBGOAL_QUESTION
        target = record.target_subgoal.surface if record.target_subgoal else ""
    else:
        raise ValueError(f"unknown role {role!r}")

    input_text = (
        f"{record.task_desc}; Time: {record.time}; Score: {record.score}; </s> "
        f"{context} </s> "
        f"Action history: {_history_str(record.history)}</s> "
        f"Current environment: {record.room_text} </s>; "
        f"Current inventory: {record.inventory_text} </s>; "
        f"{record.visited_text} </s>; "
        f"{question}"
    )
    return ensure_text_fits(input_text), target


_HEAD_RE = re.compile(
    r"^(?P<task>.*?); Time: (?P<time>\d+); Score: (?P<score>-?\d+); </s> ", re.DOTALL
)
_ACTION_CTX_RE = re.compile(
    r"^Completed subtasks are: (?P<completed>.*?)\. "
    r"The current subtask is (?P<current>.*?); </s> ",
    re.DOTALL,
)
_SUBGOAL_CTX_RE = re.compile(
    r"^The previous subtasks are: (?P<completed>.*?)\. "
    r"The current subtask is (?P<current>.*?); </s> ",
    re.DOTALL,
)
_HISTORY_ENTRY_RE = re.compile(
    r"<extra_id_(\d+)> (?P<action>.*?) \((?P<delta>[+-]?\d+)\) --> (?P<obs>.*?) \| "
)


def _parse_subgoal_list(text: str) -> list[SubGoal]:
    if text == NONE_SENTINEL:
        return []
    return [SubGoal.parse(part) for part in text.split(", ")]


def parse_record(input_text: str, role: str) -> StepRecord:
    """Invert serialize_record on every field the role renders."""

    def fail(message: str, rest: str) -> RecordParseError:
        return RecordParseError(message, raw=input_text, position=len(input_text) - len(rest))

    match = _HEAD_RE.match(input_text)
    if match is None:
        raise fail("malformed record head", input_text)
    task_desc = match.group("task")
    time = int(match.group("time"))
    score = int(match.group("score"))
    rest = input_text[match.end():]

    ctx_re = _ACTION_CTX_RE if role == ACTION_ROLE else _SUBGOAL_CTX_RE
    if role not in (ACTION_ROLE, SUBGOAL_ROLE):
        raise ValueError(f"unknown role {role!r}")
    match = ctx_re.match(rest)
    if match is None:
        raise fail("malformed subtask context", rest)
    completed = _parse_subgoal_list(match.group("completed"))
    current_text = match.group("current")
    current = None if current_text == NONE_SENTINEL else SubGoal.parse(current_text)
    rest = rest[match.end():]

    if not rest.startswith("Action history: "):
        raise fail("missing action history", rest)
    rest = rest[len("Action history: "):]
    history_text, sep, rest = rest.partition("</s> Current environment: ")
    if not sep:
        raise fail("missing environment section", rest)
    history = [
        (m.group("action"), int(m.group("delta")), m.group("obs"))
        for m in _HISTORY_ENTRY_RE.finditer(history_text)
    ]

    room_text, sep, rest = rest.partition(" </s>; Current inventory: ")
    if not sep:
        raise fail("missing inventory section", rest)
    inventory_text, sep, rest = rest.partition(" </s>; ")
    if not sep:
        raise fail("missing visited section", rest)
    visited_text, sep, rest = rest.partition(" </s>; ")
    if not sep:
        raise fail("missing question section", rest)
    expected_question = ACTION_QUESTION if role == ACTION_ROLE else SUBGOAL_QUESTION
    if rest != expected_question:
        raise fail(f"unexpected question {rest!r}", rest)

    record = StepRecord(
        task_desc=task_desc,
        time=time,
        score=score,
        completed_subgoals=completed if role == ACTION_ROLE else [],
        current_subgoal=current if role == ACTION_ROLE else None,
        prev_completed_subgoals=completed if role == SUBGOAL_ROLE else [],
        prev_subgoal=current if role == SUBGOAL_ROLE else None,
        history=history,
        room_text=room_text,
        inventory_text=inventory_text,
        visited_text=visited_text,
    )
    return record


def build_step_records(
    annotated: AnnotatedTrajectory, engine: Engine, seed: int = 0
) -> list[StepRecord]:
    """Replay the expert through the engine and emit one record per action."""
    task = engine.task(annotated.task_type_id)
    state, goal = engine.instantiate(task, annotated.variation_id, seed)

    segment_of: list[int] = []
    for index, segment in enumerate(annotated.segments):
        segment_of.extend([index] * len(segment.actions))
    subgoals = [segment.subgoal for segment in annotated.segments]

    records: list[StepRecord] = []
    history: list[tuple[str, int, str]] = []
    expert = annotated.expert
    for t, surface in enumerate(expert):
        if state.done:
            raise DataError(
                f"{annotated.task_type_id} v{annotated.variation_id}: episode finished "
                f"before step {t}"
            )
        seg = segment_of[t]
        prev_seg = segment_of[t - 1] if t > 0 else None
        record = StepRecord(
            task_desc=goal.text,
            time=t,
            score=state.cumulative_score,
            completed_subgoals=list(subgoals[:seg]),
            current_subgoal=subgoals[seg],
            prev_completed_subgoals=list(subgoals[:prev_seg]) if prev_seg is not None else [],
            prev_subgoal=subgoals[prev_seg] if prev_seg is not None else None,
            history=history[-HISTORY_WINDOW:],
            room_text=engine.render_room(state),
            inventory_text=engine.render_inventory(state),
            visited_text=engine.render_visited(state),
            target_action=surface,
            target_subgoal=subgoals[seg],
            task_type=annotated.task_type_id,
            variation=annotated.variation_id,
        )
        records.append(record)
        state, obs = engine.step_surface(state, surface)
        if obs.text == "I don't understand that.":
            raise DataError(
                f"{annotated.task_type_id} v{annotated.variation_id}: expert action "
                f"{surface!r} unparseable at step {t}"
            )
        history = history + [(surface, obs.score_delta, obs.text)]

    if state.cumulative_score != 100:
        raise DataError(
            f"{annotated.task_type_id} v{annotated.variation_id}: replay ended at "
            f"score {state.cumulative_score}, expected 100"
        )
    return records
