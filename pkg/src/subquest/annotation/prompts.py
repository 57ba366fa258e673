"""Teacher prompt construction and response parsing.

The annotation prompt has three parts: an environment preamble, two worked
examples (task description, comma-joined goal path, numbered sub-goal list
with the actions of each sub-goal in braces), and the query task with the
same instruction sentence.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass

from ..errors import RecordParseError
from ..subgoals import SubGoal
from .teacher import TeacherRequest

logger = logging.getLogger(__name__)

ENV_PREAMBLE = (
    "You are a helpful assistant. You are in a simulated environment as an agent. "
    "A task and its description will be given to you. Suggest the best actions the "
    "agent can take based on the things you see and the items in your inventory to "
    "complete the task. Only use valid actions and objects. You are allowed to do "
    "the following actions with the objects. Open or close OBJ meaning open or "
    "close a door, activate or deactivate OBJ meaning turn a device on or off, "
    "go to LOC meaning move to a new location, pick up OBJ meaning move an object "
    "to the inventory, put down OBJ meaning drop an inventory item, move OBJ to "
    "OBJ meaning move an object to a container, pour OBJ into OBJ meaning pour a "
    "liquid into a container, focus on OBJ meaning signal intent on a task object, "
    "use OBJ on OBJ meaning use a tool on an object, read OBJ meaning read a note "
    "or book, look around meaning describe the current room, look at OBJ meaning "
    "describe an object, wait meaning take no action for one step. OBJ means "
    "objects. LOC means location. There are 10 locations centered around a house "
    "theme. These are: hallway, kitchen, living room, bedroom, workshop, "
    "art studio, greenhouse, bathroom, outside, foundry."
)

INSTRUCTION = (
    "Based on the given goal path, provide me with the functional format of "
    "high-level sub-tasks to complete this task and their corresponding actions."
)

GOAL_PATH_PREFIX = "Here is the goal path to achieve to the goal: "


@dataclass(frozen=True)
class AnnotationExample:
    description: str
    expert: tuple[str, ...]
    segments: tuple[tuple[SubGoal, tuple[str, ...]], ...]

    def check(self) -> None:
        flattened = [a for _, actions in self.segments for a in actions]
        if list(self.expert) != flattened:
            raise ValueError(
                "example segments do not concatenate to the example trajectory"
            )


def render_segments(segments: tuple[tuple[SubGoal, tuple[str, ...]], ...]) -> str:
    parts = []
    for i, (subgoal, actions) in enumerate(segments, start=1):
        listed = ", ".join(f"'{a}'" for a in actions)
        parts.append(f"{i}- {subgoal.surface}: {{{listed}}}")
    return " ".join(parts)


def _example_block(index: int, example: AnnotationExample) -> str:
    return (
        f"Example {index}\n"
        f"[Task Description] {example.description}.\n"
        f"[Expert trajectory] {GOAL_PATH_PREFIX}{', '.join(example.expert)}\n"
        f"{INSTRUCTION}\n"
        f"[sub-goals] {render_segments(example.segments)}"
    )


def build_annotation_prompt(
    env_preamble: str,
    examples: tuple[AnnotationExample, AnnotationExample] | list[AnnotationExample],
    query: tuple[str, list[str]],
) -> TeacherRequest:
    """Assemble a two-shot annotation request for (description, expert actions)."""
    if len(examples) != 2:
        raise ValueError(f"exactly 2 in-context examples required, got {len(examples)}")
    for example in examples:
        example.check()
    description, expert = query
    query_block = (
        f"[Task Description] {description}.\n"
        f"[Expert trajectory] {GOAL_PATH_PREFIX}{', '.join(expert)}\n"
        f"{INSTRUCTION}"
    )
    return TeacherRequest(
        system_preamble=env_preamble,
        examples=tuple(_example_block(i + 1, ex) for i, ex in enumerate(examples)),
        query=query_block,
        temperature=0.0,
    )


_SEGMENT_RE = re.compile(
    r"(?:\d+\s*-\s*)?"
    r"([A-Za-z\\_][A-Za-z0-9\\_]*)"
    r"\s*\(([^()]*)\)\s*:\s*"
    r"\{([^{}]*)\}"
)
_ACTION_RE = re.compile(r"'([^']*)'|\"([^\"]*)\"")


def parse_subgoal_response(text: str) -> list[tuple[SubGoal, list[str]]]:
    """Tolerant parse of `N- name(args): {'a1', 'a2'}` listings.

    Accepts backslash-escaped names, optional numbering, single or double
    quotes, and segments packed on one line. Segments that yield no actions
    are skipped with a warning; zero parseable segments is a parse error.
    """
    segments: list[tuple[SubGoal, list[str]]] = []
    for match in _SEGMENT_RE.finditer(text):
        name, raw_args, raw_actions = match.groups()
        actions = [a or b for a, b in _ACTION_RE.findall(raw_actions)]
        if not actions and raw_actions.strip():
            actions = [p.strip() for p in raw_actions.split(",") if p.strip()]
        actions = [a.strip() for a in actions if a.strip()]
        if not actions:
            logger.warning("skipping sub-goal with no actions: %r", match.group(0))
            continue
        subgoal = SubGoal.parse(f"{name}({raw_args})")
        segments.append((subgoal, actions))
    if not segments:
        raise RecordParseError("no parseable sub-goal segments in response", raw=text)
    return segments
