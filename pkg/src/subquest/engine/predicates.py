"""Milestone predicate DSL.

Grammar: `at(location)`, `holding(object)`, `in(object, container)`,
`focused(object)`, `state(object, value)`, joined with ` and ` for
conjunctions. Predicates are parsed once at suite load and evaluated
against an EnvState.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import ConfigurationError
from .types import EnvState

_ATOM_RE = re.compile(r"^(at|holding|in|focused|state)\(([^()]*)\)$")
_KNOWN_ARITY = {"at": 1, "holding": 1, "in": 2, "focused": 1, "state": 2}


@dataclass(frozen=True)
class Atom:
    name: str
    args: tuple[str, ...]


@dataclass(frozen=True)
class Predicate:
    atoms: tuple[Atom, ...]
    source: str


def parse_predicate(text: str) -> Predicate:
    atoms = []
    for part in text.split(" and "):
        part = part.strip()
        match = _ATOM_RE.match(part)
        if match is None:
            raise ConfigurationError(f"unparseable predicate clause {part!r} in {text!r}")
        name = match.group(1)
        args = tuple(a.strip() for a in match.group(2).split(",") if a.strip())
        if len(args) != _KNOWN_ARITY[name]:
            raise ConfigurationError(
                f"predicate {name!r} expects {_KNOWN_ARITY[name]} argument(s), "
                f"got {len(args)} in {text!r}"
            )
        atoms.append(Atom(name, args))
    return Predicate(tuple(atoms), text)


def eval_atom(atom: Atom, state: EnvState) -> bool:
    if atom.name == "at":
        return state.agent_location == atom.args[0]
    if atom.name == "holding":
        return atom.args[0] in state.inventory
    if atom.name == "in":
        obj, container = atom.args
        return obj in state.containers.get(container, ())
    if atom.name == "focused":
        return state.focused == atom.args[0]
    if atom.name == "state":
        obj, value = atom.args
        return state.object_states.get(obj) == value
    raise ConfigurationError(f"unknown predicate {atom.name!r}")


def eval_predicate(pred: Predicate, state: EnvState) -> bool:
    return all(eval_atom(atom, state) for atom in pred.atoms)
