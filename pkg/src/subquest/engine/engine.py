"""Deterministic multi-task text-world engine.

One Engine is bound to an immutable task suite and is shareable across
episodes; all per-episode state lives in EnvState. `step` is functional:
it returns a new state and never mutates its input.
"""

from __future__ import annotations

import hashlib
import random

from ..errors import ConfigurationError
from . import world
from .predicates import Predicate, eval_predicate, parse_predicate
from .suite import TaskSpec, get_task, substitute
from .types import (
    Action,
    EnvState,
    GoalDescription,
    Observation,
    TerminationReason,
)

_PHASE_TEMPERATURES = {"solid": -10, "liquid": 20, "gas": 105, "measured": 20}


def stable_seed(*parts: object) -> int:
    """Platform-independent integer seed derived from the given parts."""
    digest = hashlib.sha256("::".join(str(p) for p in parts).encode()).digest()
    return int.from_bytes(digest[:8], "big")


class Engine:
    def __init__(self, suite: tuple[TaskSpec, ...]):
        self.suite = suite
        self._compiled: dict[tuple[str, int], list[tuple[Predicate, int, str]]] = {}
        self._focus: dict[tuple[str, int], frozenset[str]] = {}

    # -- instantiation -------------------------------------------------

    def task(self, task_type_id: str) -> TaskSpec:
        return get_task(self.suite, task_type_id)

    def _materialize(self, task: TaskSpec, variation_id: int) -> None:
        key = (task.task_type_id, variation_id)
        if key in self._compiled:
            return
        params = task.variations[variation_id].params
        compiled = []
        for m in task.milestones:
            pred = parse_predicate(substitute(m.predicate, params))
            compiled.append((pred, m.points, substitute(m.subgoal, params)))
        self._compiled[key] = compiled
        self._focus[key] = frozenset(substitute(t, params) for t in task.focus_targets)

    def milestones_for(self, task: TaskSpec, variation_id: int) -> list[tuple[Predicate, int, str]]:
        self._materialize(task, variation_id)
        return self._compiled[(task.task_type_id, variation_id)]

    def instantiate(self, task: TaskSpec, variation_id: int, seed: int) -> tuple[EnvState, GoalDescription]:
        """Build the initial episode state. Fully determined by
        (task_type_id, variation_id, seed); the seed only shuffles distractors."""
        if not 0 <= variation_id < len(task.variations):
            raise IndexError(
                f"variation_id {variation_id} out of range for {task.task_type_id!r} "
                f"({len(task.variations)} variations)"
            )
        self._materialize(task, variation_id)
        params = task.variations[variation_id].params

        rooms = {room: list(items) for room, items in world.BASE_CONTENTS.items()}
        containers: dict[str, list[str]] = {
            name: [] for name in world.OBJECTS if world.is_container(name)
        }
        object_states: dict[str, str] = {}
        for room_items in rooms.values():
            for name in room_items:
                if world.is_device(name):
                    object_states[name] = "off"

        for obj, target in params.get("place", ()):    # task objects
            if target in world.ROOMS:
                rooms[target].append(obj)
            elif world.is_container(target):
                containers[target].append(obj)
            else:
                raise ConfigurationError(f"placement target {target!r} is neither room nor container")
            if world.is_substance(obj):
                object_states[obj] = world.INITIAL_PHASE.get(obj, "solid")
            if world.is_device(obj):
                object_states[obj] = "off"

        # Doors depend only on the variation so expert trajectories are
        # seed-independent; distractors depend on the full seed.
        door_rng = random.Random(stable_seed("doors", task.task_type_id, variation_id))
        doors_open = {door: door_rng.random() < 0.25 for door in world.ALL_DOORS}

        rng = random.Random(stable_seed(task.task_type_id, variation_id, seed))
        placed = {obj for obj, _ in params.get("place", ())}
        pool = [d for d in world.DISTRACTOR_POOL if d not in placed]
        rng.shuffle(pool)
        for name in pool[: rng.randint(5, len(pool))]:
            rooms[rng.choice(world.ROOMS)].append(name)

        state = EnvState(
            task_type_id=task.task_type_id,
            variation_id=variation_id,
            rng_seed=seed,
            agent_location=params["agent_start"],
            rooms=rooms,
            containers=containers,
            object_states=object_states,
            milestones_hit=[False] * len(task.milestones),
            doors_open=doors_open,
            visited_rooms=[params["agent_start"]],
        )
        goal = GoalDescription(
            task_type_id=task.task_type_id,
            variation_id=variation_id,
            text=substitute(task.description_template, params),
        )
        return state, goal

    # -- visibility helpers --------------------------------------------

    def _container_contents(self, state: EnvState, name: str, acc: set[str]) -> None:
        for item in state.containers.get(name, ()):
            if item not in acc:
                acc.add(item)
                if world.is_container(item):
                    self._container_contents(state, item, acc)

    def visible_in_room(self, state: EnvState) -> set[str]:
        acc: set[str] = set()
        for item in state.rooms[state.agent_location]:
            acc.add(item)
            if world.is_container(item):
                self._container_contents(state, item, acc)
        return acc

    def visible_all(self, state: EnvState) -> set[str]:
        acc = self.visible_in_room(state)
        for item in state.inventory:
            acc.add(item)
            if world.is_container(item):
                self._container_contents(state, item, acc)
        return acc

    def _remove_object(self, state: EnvState, obj: str) -> None:
        room_items = state.rooms[state.agent_location]
        if obj in room_items:
            room_items.remove(obj)
            return
        if obj in state.inventory:
            state.inventory.remove(obj)
            return
        for items in state.containers.values():
            if obj in items:
                items.remove(obj)
                return
        raise KeyError(obj)

    def _inside(self, state: EnvState, obj: str, container: str) -> bool:
        """True when `container` is transitively inside `obj`."""
        for item in state.containers.get(obj, ()):
            if item == container or (world.is_container(item) and self._inside(state, item, container)):
                return True
        return False

    # -- stepping --------------------------------------------------------

    def step(self, state: EnvState, action: Action) -> tuple[EnvState, Observation]:
        if state.done:
            raise ValueError("cannot step a finished episode")
        new = state.copy()
        new.step_count += 1
        prev_score = new.cumulative_score

        text = self._execute(new, action)

        wrong_focus = (
            action.verb == "focus_on"
            and new.focused == action.args[0]
            and action.args[0] not in self._focus[(state.task_type_id, state.variation_id)]
        )
        if wrong_focus:
            new.cumulative_score = 0
            new.done = True
            new.termination_reason = TerminationReason.WRONG_FOCUS
            text += " That was not the correct thing to focus on. The task has failed."
        else:
            text += self._tick_processes(new)
            self._latch_milestones(new)
            if all(new.milestones_hit):
                new.done = True
                new.termination_reason = TerminationReason.TASK_COMPLETE

        obs = Observation(
            text=text,
            score_after=new.cumulative_score,
            score_delta=new.cumulative_score - prev_score,
            done=new.done,
            termination_reason=new.termination_reason,
        )
        return new, obs

    def step_surface(self, state: EnvState, surface: str) -> tuple[EnvState, Observation]:
        """Step from a raw surface string; unparseable input is a soft failure."""
        action = Action.parse(surface)
        if action is None:
            new = state.copy()
            new.step_count += 1
            obs = Observation(
                text="I don't understand that.",
                score_after=new.cumulative_score,
                score_delta=0,
                done=False,
            )
            return new, obs
        return self.step(state, action)

    def _execute(self, new: EnvState, action: Action) -> str:
        verb, args = action.verb, action.args
        here = new.agent_location

        if verb == "look_around":
            return self.render_room(new)
        if verb == "wait":
            return "You decide to wait."

        if verb in ("go_to", "open_door", "close_door"):
            dest = args[0]
            if dest not in world.ADJACENCY.get(here, ()):
                if verb == "go_to":
                    return "You can't go there from here."
                return f"There is no door to the {dest} here."
            key = world.door_key(here, dest)
            if verb == "open_door":
                if new.doors_open[key]:
                    return "The door is already open."
                new.doors_open[key] = True
                return f"The door to the {dest} is now open."
            if verb == "close_door":
                if not new.doors_open[key]:
                    return "The door is already closed."
                new.doors_open[key] = False
                return f"The door to the {dest} is now closed."
            if not new.doors_open[key]:
                return f"The door to the {dest} is closed."
            new.agent_location = dest
            if dest not in new.visited_rooms:
                new.visited_rooms.append(dest)
            return f"You move to the {dest}."

        visible_room = self.visible_in_room(new)
        visible = visible_room | set(new.inventory)
        for item in new.inventory:
            if world.is_container(item):
                self._container_contents(new, item, visible)

        if verb == "pick_up":
            obj = args[0]
            if obj not in visible_room:
                return f"You don't see the {obj} here."
            if not world.is_portable(obj):
                return f"The {obj} can't be picked up."
            self._remove_object(new, obj)
            new.inventory.append(obj)
            return f"You move the {obj} to the inventory."

        if verb == "put_down":
            obj = args[0]
            if obj not in new.inventory:
                return f"You don't have the {obj}."
            new.inventory.remove(obj)
            new.rooms[here].append(obj)
            return f"You put the {obj} down."

        if verb == "focus_on":
            obj = args[0]
            if obj not in visible:
                return f"You don't see the {obj} here."
            new.focused = obj
            return f"You focus on the {obj}."

        if verb in ("move_to", "pour_into"):
            obj, container = args
            if obj not in visible:
                return f"You don't see the {obj} here."
            if container not in visible:
                return f"You don't see the {container} here."
            if not world.is_container(container):
                return f"The {container} is not a container."
            if verb == "pour_into" and not world.is_substance(obj):
                return f"The {obj} can't be poured."
            if verb == "move_to" and not world.is_portable(obj):
                return f"The {obj} can't be moved."
            if obj == container or self._inside(new, obj, container):
                return "You can't do that."
            self._remove_object(new, obj)
            new.containers[container].append(obj)
            word = "pour" if verb == "pour_into" else "move"
            return f"You {word} the {obj} to the {container}."

        if verb in ("activate", "deactivate"):
            obj = args[0]
            if obj not in visible_room:
                return f"You don't see the {obj} here."
            if not world.is_device(obj):
                return f"The {obj} can't be activated."
            if verb == "activate":
                if new.object_states.get(obj) == "on":
                    return f"The {obj} is already activated."
                new.object_states[obj] = "on"
                return f"The {obj} is now activated."
            if new.object_states.get(obj) != "on":
                return f"The {obj} is already deactivated."
            new.object_states[obj] = "off"
            return f"The {obj} is now deactivated."

        if verb == "read":
            obj = args[0]
            if obj not in visible or not world.is_readable(obj):
                return "There is nothing to read."
            return f"You read the {obj}. It is about the house."

        if verb == "look_at":
            obj = args[0]
            if obj not in visible:
                return f"You don't see the {obj} here."
            return f"It is {self._render_item(new, obj)}."

        if verb == "use_on":
            tool, target = args
            if tool not in visible or target not in visible:
                return "You don't see that here."
            if world.is_tool(tool) and world.is_substance(target):
                phase = new.object_states.get(target, "solid")
                temp = _PHASE_TEMPERATURES.get(phase, 20)
                new.object_states[target] = "measured"
                return f"The thermometer measures a temperature of {temp} degrees celsius."
            return "Nothing interesting happens."

        if verb == "use":
            return f"You are not sure how to use the {args[0]}."

        raise ValueError(f"unhandled verb {action.verb!r}")

    def _tick_processes(self, new: EnvState) -> str:
        """Advance heating/freezing for substances inside active devices."""
        task = self.task(new.task_type_id)
        params = task.variations[new.variation_id].params
        phase_steps = int(params.get("phase_steps", 20))
        extra = ""
        for device in (*world.HEATING_DEVICES, *world.COOLING_DEVICES):
            if new.object_states.get(device) != "on":
                continue
            contents: set[str] = set()
            self._container_contents(new, device, contents)
            for obj in sorted(contents):
                if not world.is_substance(obj):
                    continue
                if device in world.COOLING_DEVICES:
                    target = world.FREEZE_TARGET
                else:
                    target = world.HEAT_TARGETS.get(obj, "liquid")
                progress = new.phase_progress.get(obj, 0)
                if progress >= phase_steps or new.object_states.get(obj) == target:
                    continue
                progress += 1
                new.phase_progress[obj] = progress
                if progress >= phase_steps:
                    new.object_states[obj] = target
                    extra += f" The {obj} is now {target}."
        return extra

    def _latch_milestones(self, new: EnvState) -> None:
        for i, (pred, points, _) in enumerate(
            self.milestones_for(self.task(new.task_type_id), new.variation_id)
        ):
            if not new.milestones_hit[i] and eval_predicate(pred, new):
                new.milestones_hit[i] = True
                new.cumulative_score += points

    # -- admissible commands ---------------------------------------------

    def admissible_commands(self, state: EnvState) -> list[Action]:
        """Every action guaranteed to parse and execute meaningfully,
        deterministic and sorted by surface string."""
        actions: list[Action] = [Action.make("look_around"), Action.make("wait")]
        here = state.agent_location
        for dest in world.ADJACENCY[here]:
            key = world.door_key(here, dest)
            if state.doors_open[key]:
                actions.append(Action.make("go_to", dest))
                actions.append(Action.make("close_door", dest))
            else:
                actions.append(Action.make("open_door", dest))

        visible_room = self.visible_in_room(state)
        visible = set(visible_room) | set(state.inventory)
        for item in state.inventory:
            if world.is_container(item):
                self._container_contents(state, item, visible)

        for obj in visible_room:
            if world.is_portable(obj):
                actions.append(Action.make("pick_up", obj))
            if world.is_device(obj):
                if state.object_states.get(obj) == "on":
                    actions.append(Action.make("deactivate", obj))
                else:
                    actions.append(Action.make("activate", obj))
        for obj in state.inventory:
            actions.append(Action.make("put_down", obj))

        containers = [c for c in visible if world.is_container(c)]
        for obj in visible:
            actions.append(Action.make("focus_on", obj))
            actions.append(Action.make("look_at", obj))
            if world.is_readable(obj):
                actions.append(Action.make("read", obj))
            for container in containers:
                if obj == container or self._inside(state, obj, container):
                    continue
                if world.is_substance(obj):
                    if obj not in state.containers.get(container, ()):
                        actions.append(Action.make("pour_into", obj, container))
                elif world.is_portable(obj):
                    if obj not in state.containers.get(container, ()):
                        actions.append(Action.make("move_to", obj, container))
        tools = [t for t in visible if world.is_tool(t)]
        for tool in tools:
            for obj in visible:
                if world.is_substance(obj):
                    actions.append(Action.make("use_on", tool, obj))

        unique = {a.surface: a for a in actions}
        return [unique[s] for s in sorted(unique)]

    # -- renders -----------------------------------------------------------

    def _render_item(self, state: EnvState, name: str) -> str:
        base = world.with_article(name)
        contents = state.containers.get(name, ())
        if contents:
            inner = ", ".join(world.with_article(c) for c in contents)
            return f"{base} (containing {inner})"
        return base

    def render_room(self, state: EnvState) -> str:
        room = state.agent_location
        kind = "outside location" if room == "outside" else "room"
        items = " | ".join(self._render_item(state, o) for o in state.rooms[room])
        doors = " | ".join(f"A door to the {d}" for d in world.ADJACENCY[room])
        parts = f"This {kind} is called the {room}. Here you see: | the agent"
        if items:
            parts += f" | {items}"
        parts += f" | You also see: | {doors} |"
        return parts

    def render_inventory(self, state: EnvState) -> str:
        if state.inventory:
            items = " | ".join(self._render_item(state, o) for o in state.inventory)
        else:
            items = "nothing"
        return f"In your inventory, you see: | {items} |"

    def render_visited(self, state: EnvState) -> str:
        return "Visited rooms: " + ", ".join(state.visited_rooms)
