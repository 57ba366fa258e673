"""Function-call style sub-goals shared by the engine, pipeline, and runtime."""

from __future__ import annotations

import re
from dataclasses import dataclass

_CALL_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\((.*)\)$", re.DOTALL)


@dataclass(frozen=True)
class SubGoal:
    name: str
    args: tuple[str, ...]

    @property
    def surface(self) -> str:
        if not self.args and "(" not in self.name:
            # Opaque sub-goal: raw text that never parsed as a call.
            return self.name
        return f"{self.name}({', '.join(self.args)})"

    @staticmethod
    def parse(text: str) -> "SubGoal":
        """Parse `name(arg1, arg2)`; `\\_` escapes are normalized and
        whitespace trimmed. Text that is not a call becomes an opaque
        sub-goal used verbatim."""
        cleaned = text.replace("\\_", "_").strip()
        match = _CALL_RE.match(cleaned)
        if match is None:
            return SubGoal(cleaned, ())
        name = match.group(1)
        raw_args = match.group(2).strip()
        if not raw_args:
            return SubGoal(name, ())
        args = tuple(a.strip() for a in raw_args.split(","))
        if any(not a for a in args):
            return SubGoal(cleaned, ())
        return SubGoal(name, args)


NONE_SENTINEL = "none"


def render_subgoal(subgoal: SubGoal | None) -> str:
    return NONE_SENTINEL if subgoal is None else subgoal.surface
