"""Gold trajectory generation.

Each milestone's sub-goal label doubles as a recipe: the solver expands it
into concrete actions against a simulated episode, so every expert action
carries the milestone label it serves.
"""

from __future__ import annotations

from collections import deque

from ..errors import SuiteAuthoringError
from ..subgoals import SubGoal
from . import world
from .engine import Engine
from .suite import TaskSpec
from .types import Action, EnvState

_MONITOR_CAP = 200


def _bfs_path(start: str, goal: str) -> list[str]:
    if start == goal:
        return []
    parents: dict[str, str] = {start: start}
    queue = deque([start])
    while queue:
        room = queue.popleft()
        for neighbor in world.ADJACENCY[room]:
            if neighbor not in parents:
                parents[neighbor] = room
                if neighbor == goal:
                    path = [neighbor]
                    while path[-1] != start:
                        path.append(parents[path[-1]])
                    path.reverse()
                    return path[1:]
                queue.append(neighbor)
    raise SuiteAuthoringError(f"no path from {start!r} to {goal!r}")


def _navigation_actions(sim: EnvState, goal_room: str) -> list[Action]:
    actions = []
    here = sim.agent_location
    doors = dict(sim.doors_open)
    for hop in _bfs_path(here, goal_room):
        key = world.door_key(here, hop)
        if not doors[key]:
            actions.append(Action.make("open_door", hop))
            doors[key] = True
        actions.append(Action.make("go_to", hop))
        here = hop
    return actions


def _recipe(engine: Engine, sim: EnvState, subgoal: SubGoal) -> list[Action]:
    name, args = subgoal.name, subgoal.args
    if name == "navigate_to":
        return _navigation_actions(sim, args[0])
    if name == "focus_on":
        return [Action.make("focus_on", args[0])]
    if name == "pick_up":
        return [Action.make("pick_up", args[0])]
    if name == "fill":
        container, substance = args
        return [Action.make("pour_into", substance, container)]
    if name == "move":
        return [Action.make("move_to", args[0], args[1])]
    if name == "activate":
        return [Action.make("activate", args[0])]
    if name == "measure":
        return [Action.make("use_on", "thermometer", args[0])]
    if name == "monitor_until":
        # Expanded step by step by the caller; signalled with a sentinel.
        return []
    raise SuiteAuthoringError(f"no recipe for sub-goal {subgoal.surface!r}")


def expert_trajectory(engine: Engine, task: TaskSpec, variation_id: int) -> list[tuple[Action, SubGoal]]:
    """Solve one variation, labelling every action with its milestone's
    sub-goal. Replaying the result from instantiate() scores exactly 100."""
    sim, _ = engine.instantiate(task, variation_id, seed=0)
    trajectory: list[tuple[Action, SubGoal]] = []
    milestones = engine.milestones_for(task, variation_id)

    for index, (pred, _points, label) in enumerate(milestones):
        subgoal = SubGoal.parse(label)
        if subgoal.name == "monitor_until":
            target_obj, target_state = subgoal.args
            waited = 0
            while sim.object_states.get(target_obj) != target_state:
                waited += 1
                if waited > _MONITOR_CAP:
                    raise SuiteAuthoringError(
                        f"{task.task_type_id} v{variation_id}: {label} never completed"
                    )
                action = Action.make("wait")
                sim, _obs = engine.step(sim, action)
                trajectory.append((action, subgoal))
        else:
            actions = _recipe(engine, sim, subgoal)
            if not actions:
                raise SuiteAuthoringError(
                    f"{task.task_type_id} v{variation_id}: milestone {index} ({label}) "
                    "expands to zero actions"
                )
            for action in actions:
                sim, _obs = engine.step(sim, action)
                trajectory.append((action, subgoal))
        if not sim.milestones_hit[index]:
            raise SuiteAuthoringError(
                f"{task.task_type_id} v{variation_id}: milestone {index} ({label}) "
                "not satisfied after its recipe"
            )

    if sim.cumulative_score != 100 or not sim.done:
        raise SuiteAuthoringError(
            f"{task.task_type_id} v{variation_id}: expert ends at score "
            f"{sim.cumulative_score}, done={sim.done}"
        )
    return trajectory


def gold_segments(trajectory: list[tuple[Action, SubGoal]]) -> list[tuple[SubGoal, list[str]]]:
    """Group consecutive trajectory actions by their sub-goal label."""
    segments: list[tuple[SubGoal, list[str]]] = []
    for action, subgoal in trajectory:
        if segments and segments[-1][0].surface == subgoal.surface:
            segments[-1][1].append(action.surface)
        else:
            segments.append((subgoal, [action.surface]))
    return segments
