"""Task-suite loading, validation, and variation splits."""

from __future__ import annotations

import json
import re
from pathlib import Path

from ..errors import ConfigurationError
from . import world
from .predicates import parse_predicate
from .types import Milestone, TaskSpec, VariationSpec, VariationSplit

_SLOT_RE = re.compile(r"\{([a-z_][a-z0-9_]*)\}")

TaskSuite = tuple  # of TaskSpec


def substitute(template: str, params: dict) -> str:
    """Instantiate `{slot}` placeholders from a variation's parameters."""

    def repl(match: re.Match) -> str:
        key = match.group(1)
        if key not in params:
            raise ConfigurationError(f"template slot {{{key}}} missing from variation params")
        return str(params[key])

    return _SLOT_RE.sub(repl, template)


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ConfigurationError(message)


def _load_task(raw: dict, index: int) -> TaskSpec:
    where = f"tasks[{index}]"
    for field_name in ("task_type_id", "theme", "description_template", "milestones", "variations"):
        _require(field_name in raw, f"{where}: missing field {field_name!r}")
    task_id = raw["task_type_id"]
    _require(isinstance(task_id, str) and task_id, f"{where}.task_type_id: must be a non-empty string")

    milestones = []
    for j, m in enumerate(raw["milestones"]):
        for field_name in ("predicate", "points", "subgoal"):
            _require(field_name in m, f"{where}.milestones[{j}]: missing field {field_name!r}")
        _require(
            isinstance(m["points"], int) and m["points"] > 0,
            f"{where}.milestones[{j}].points: must be a positive integer",
        )
        milestones.append(Milestone(m["predicate"], m["points"], m["subgoal"]))
    total = sum(m.points for m in milestones)
    _require(total == 100, f"{where}.milestones: points sum to {total}, expected 100")

    variations = []
    slots = set(_SLOT_RE.findall(raw["description_template"]))
    for m in raw["milestones"]:
        slots |= set(_SLOT_RE.findall(m["predicate"]))
        slots |= set(_SLOT_RE.findall(m["subgoal"]))
    for j, v in enumerate(raw["variations"]):
        _require(isinstance(v, dict), f"{where}.variations[{j}]: must be an object")
        missing = slots - set(v)
        _require(not missing, f"{where}.variations[{j}]: missing slot values {sorted(missing)}")
        for obj, target in v.get("place", ()):  # placements refer to known names
            _require(obj in world.OBJECTS, f"{where}.variations[{j}]: unknown object {obj!r}")
            _require(
                target in world.ROOMS or world.is_container(target),
                f"{where}.variations[{j}]: placement target {target!r} is neither room nor container",
            )
        start = v.get("agent_start")
        _require(start in world.ROOMS, f"{where}.variations[{j}].agent_start: unknown room {start!r}")
        variations.append(VariationSpec(dict(v)))
    _require(len(variations) >= 1, f"{where}.variations: at least one variation required")

    # Compile every instantiated predicate now so bad DSL fails at load time.
    for j, variation in enumerate(variations):
        for m in milestones:
            parse_predicate(substitute(m.predicate, variation.params))

    return TaskSpec(
        task_type_id=task_id,
        theme=raw["theme"],
        description_template=raw["description_template"],
        focus_targets=tuple(raw.get("focus_targets", ())),
        milestones=tuple(milestones),
        variations=tuple(variations),
    )


def load_task_suite(config_path: str | Path) -> tuple[TaskSpec, ...]:
    """Load and validate a task-suite JSON file. Deterministic in the file bytes."""
    path = Path(config_path)
    if not path.exists():
        raise FileNotFoundError(f"task suite file not found: {path}")
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"{path}: invalid JSON: {exc}") from exc
    _require(isinstance(raw, dict) and "tasks" in raw, f"{path}: missing top-level 'tasks' field")
    tasks = raw["tasks"]
    _require(isinstance(tasks, list) and len(tasks) > 0, "tasks: must be a non-empty list")
    suite = tuple(_load_task(t, i) for i, t in enumerate(tasks))
    ids = [t.task_type_id for t in suite]
    _require(len(set(ids)) == len(ids), "tasks: duplicate task_type_id")
    return suite


def get_task(suite: tuple[TaskSpec, ...], task_type_id: str) -> TaskSpec:
    for task in suite:
        if task.task_type_id == task_type_id:
            return task
    raise KeyError(f"unknown task type {task_type_id!r}")


def split_variations(task: TaskSpec) -> VariationSplit:
    """Partition variation ids into 50/25/25 position blocks.

    Train takes the first half rounded up; of the remainder, dev takes the
    first half rounded down and test the rest.
    """
    n = len(task.variations)
    if n < 4:
        raise ConfigurationError(
            f"task {task.task_type_id!r} has {n} variations; at least 4 required to split"
        )
    n_train = (n + 1) // 2
    rest = n - n_train
    n_dev = rest // 2
    ids = tuple(range(n))
    return VariationSplit(
        train=ids[:n_train],
        dev=ids[n_train:n_train + n_dev],
        test=ids[n_train + n_dev:],
    )
