"""Domain types for the text-world engine.

Text payloads are whitespace-tokenized and bounded; actions are rendered
from a fixed template registry so every surface string is canonical.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field

DEFAULT_MAX_TOKENS = 1024


def token_count(text: str) -> int:
    return len(text.split())


def ensure_text_fits(text: str, max_tokens: int = DEFAULT_MAX_TOKENS) -> str:
    """Enforce the token budget on a rendered text payload."""
    n = token_count(text)
    if n > max_tokens:
        raise ValueError(f"text of {n} tokens exceeds the {max_tokens}-token limit")
    return text


@dataclass(frozen=True)
class GoalDescription:
    task_type_id: str
    variation_id: int
    text: str


class TerminationReason:
    NONE = "none"
    TASK_COMPLETE = "task_complete"
    WRONG_FOCUS = "wrong_focus"
    STEP_LIMIT = "step_limit"
    STALL_LIMIT = "stall_limit"


@dataclass(frozen=True)
class Observation:
    text: str
    score_after: int
    score_delta: int
    done: bool
    termination_reason: str = TerminationReason.NONE

    def __post_init__(self) -> None:
        if not 0 <= self.score_after <= 100:
            raise ValueError(f"score_after {self.score_after} outside [0, 100]")
        if self.done != (self.termination_reason != TerminationReason.NONE):
            raise ValueError("done must be true exactly when a termination reason is set")


# Action templates. Order matters for parsing: longer prefixes first.
# (verb, prefix, separator-or-None-for-single-arg, arity)
_TEMPLATES: tuple[tuple[str, str, str | None, int], ...] = (
    ("look_around", "look around", None, 0),
    ("wait", "wait", None, 0),
    ("open_door", "open door to ", None, 1),
    ("close_door", "close door to ", None, 1),
    ("go_to", "go to ", None, 1),
    ("pick_up", "pick up ", None, 1),
    ("put_down", "put down ", None, 1),
    ("focus_on", "focus on ", None, 1),
    ("activate", "activate ", None, 1),
    ("deactivate", "deactivate ", None, 1),
    ("read", "read ", None, 1),
    ("look_at", "look at ", None, 1),
    ("move_to", "move ", " to ", 2),
    ("pour_into", "pour ", " into ", 2),
    ("use_on", "use ", " on ", 2),
    ("use", "use ", None, 1),
)

ACTION_VERBS: tuple[str, ...] = tuple(t[0] for t in _TEMPLATES)


@dataclass(frozen=True)
class Action:
    verb: str
    args: tuple[str, ...]
    surface: str

    @staticmethod
    def make(verb: str, *args: str) -> "Action":
        for v, prefix, sep, arity in _TEMPLATES:
            if v != verb:
                continue
            if len(args) != arity:
                raise ValueError(f"{verb} takes {arity} argument(s), got {len(args)}")
            if arity == 0:
                surface = prefix
            elif arity == 1:
                surface = prefix + args[0]
            else:
                surface = prefix + args[0] + (sep or "") + args[1]
            return Action(verb, tuple(args), surface)
        raise ValueError(f"unknown action verb {verb!r}")

    @staticmethod
    def parse(surface: str) -> "Action | None":
        """Parse a canonical surface string; None when no template matches."""
        text = " ".join(surface.strip().lower().split())
        for verb, prefix, sep, arity in _TEMPLATES:
            if arity == 0:
                if text == prefix:
                    return Action(verb, (), prefix)
                continue
            if not text.startswith(prefix):
                continue
            rest = text[len(prefix):]
            if not rest:
                continue
            if arity == 1:
                if sep is None:
                    return Action(verb, (rest,), text)
                continue
            if sep is not None and sep in rest:
                first, _, second = rest.partition(sep)
                if first and second:
                    return Action(verb, (first, second), text)
        return None


@dataclass
class EnvState:
    """Full mutable state of one episode. Single-owner: one driver at a time."""

    task_type_id: str
    variation_id: int
    rng_seed: int
    agent_location: str
    rooms: dict[str, list[str]]
    containers: dict[str, list[str]]
    inventory: list[str] = field(default_factory=list)
    visited_rooms: list[str] = field(default_factory=list)
    doors_open: dict[str, bool] = field(default_factory=dict)
    object_states: dict[str, str] = field(default_factory=dict)
    phase_progress: dict[str, int] = field(default_factory=dict)
    focused: str | None = None
    milestones_hit: list[bool] = field(default_factory=list)
    cumulative_score: int = 0
    step_count: int = 0
    done: bool = False
    termination_reason: str = TerminationReason.NONE

    def copy(self) -> "EnvState":
        new = copy.copy(self)
        new.rooms = {k: list(v) for k, v in self.rooms.items()}
        new.containers = {k: list(v) for k, v in self.containers.items()}
        new.inventory = list(self.inventory)
        new.visited_rooms = list(self.visited_rooms)
        new.doors_open = dict(self.doors_open)
        new.object_states = dict(self.object_states)
        new.phase_progress = dict(self.phase_progress)
        new.milestones_hit = list(self.milestones_hit)
        return new

    def to_dict(self) -> dict:
        return {
            "task_type_id": self.task_type_id,
            "variation_id": self.variation_id,
            "rng_seed": self.rng_seed,
            "agent_location": self.agent_location,
            "rooms": {k: list(v) for k, v in self.rooms.items()},
            "containers": {k: list(v) for k, v in self.containers.items()},
            "inventory": list(self.inventory),
            "visited_rooms": list(self.visited_rooms),
            "doors_open": dict(self.doors_open),
            "object_states": dict(self.object_states),
            "phase_progress": dict(self.phase_progress),
            "focused": self.focused,
            "milestones_hit": list(self.milestones_hit),
            "cumulative_score": self.cumulative_score,
            "step_count": self.step_count,
            "done": self.done,
            "termination_reason": self.termination_reason,
        }


@dataclass(frozen=True)
class Milestone:
    predicate: str
    points: int
    subgoal: str


@dataclass(frozen=True)
class VariationSpec:
    params: dict

    def __getitem__(self, key: str) -> object:
        return self.params[key]


@dataclass(frozen=True)
class TaskSpec:
    task_type_id: str
    theme: str
    description_template: str
    focus_targets: tuple[str, ...]
    milestones: tuple[Milestone, ...]
    variations: tuple[VariationSpec, ...]


@dataclass(frozen=True)
class VariationSplit:
    train: tuple[int, ...]
    dev: tuple[int, ...]
    test: tuple[int, ...]

    def for_name(self, name: str) -> tuple[int, ...]:
        if name not in ("train", "dev", "test"):
            raise ValueError(f"unknown split {name!r}")
        return getattr(self, name)
