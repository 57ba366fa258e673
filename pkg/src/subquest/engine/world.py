"""Static world model: the house map, object registry, and render helpers.

The map and object kinds are fixed; task variations only choose where task
objects are placed and which seeded distractors fill the rooms.
"""

from __future__ import annotations

from dataclasses import dataclass

# Rooms, hub-and-spoke around the hallway plus an outdoor loop.
ROOMS: tuple[str, ...] = (
    "hallway",
    "kitchen",
    "living room",
    "bedroom",
    "workshop",
    "art studio",
    "greenhouse",
    "bathroom",
    "outside",
    "foundry",
)

_EDGES: tuple[tuple[str, str], ...] = (
    ("hallway", "kitchen"),
    ("hallway", "living room"),
    ("hallway", "bedroom"),
    ("hallway", "workshop"),
    ("hallway", "art studio"),
    ("hallway", "greenhouse"),
    ("hallway", "bathroom"),
    ("greenhouse", "outside"),
    ("outside", "kitchen"),
    ("outside", "foundry"),
)

ADJACENCY: dict[str, tuple[str, ...]] = {}
for _a, _b in _EDGES:
    ADJACENCY.setdefault(_a, ())
    ADJACENCY.setdefault(_b, ())
for _room in ROOMS:
    ADJACENCY[_room] = tuple(
        sorted({b for a, b in _EDGES if a == _room} | {a for a, b in _EDGES if b == _room})
    )


def door_key(room_a: str, room_b: str) -> str:
    """Canonical key for the door between two rooms."""
    return "::".join(sorted((room_a, room_b)))


ALL_DOORS: tuple[str, ...] = tuple(sorted(door_key(a, b) for a, b in _EDGES))


@dataclass(frozen=True)
class ObjectKind:
    portable: bool = False
    container: bool = False
    device: bool = False
    substance: bool = False
    creature: bool = False
    readable: bool = False
    tool: bool = False


# Object registry. Names never contain the action separators
# (" to ", " into ", " on ") so surfaces parse unambiguously.
OBJECTS: dict[str, ObjectKind] = {
    # fixtures and devices
    "stove": ObjectKind(container=True, device=True),
    "freezer": ObjectKind(container=True, device=True),
    "sink": ObjectKind(container=True, device=True),
    "blast furnace": ObjectKind(container=True, device=True),
    "fountain": ObjectKind(container=True),
    "fire pit": ObjectKind(container=True),
    "bathtub": ObjectKind(container=True),
    "closet": ObjectKind(container=True),
    "coffee table": ObjectKind(container=True),
    "counter": ObjectKind(container=True),
    "table": ObjectKind(container=True),
    "flower pot": ObjectKind(container=True),
    "easel": ObjectKind(),
    "bed": ObjectKind(),
    "couch": ObjectKind(),
    "toilet": ObjectKind(container=True),
    "picture": ObjectKind(readable=True),
    "ground": ObjectKind(),
    "axe": ObjectKind(portable=True),
    "shovel": ObjectKind(portable=True),
    # portable containers
    "metal pot": ObjectKind(portable=True, container=True),
    "jug": ObjectKind(portable=True, container=True),
    "paint cup": ObjectKind(portable=True, container=True),
    "red box": ObjectKind(container=True),
    "green box": ObjectKind(container=True),
    "blue box": ObjectKind(container=True),
    "wooden tray": ObjectKind(container=True),
    # tools
    "thermometer": ObjectKind(portable=True, tool=True),
    # substances
    "water": ObjectKind(portable=True, substance=True),
    "milk": ObjectKind(portable=True, substance=True),
    "orange juice": ObjectKind(portable=True, substance=True),
    "paint": ObjectKind(portable=True, substance=True),
    "chocolate": ObjectKind(portable=True, substance=True),
    "butter": ObjectKind(portable=True, substance=True),
    "wax": ObjectKind(portable=True, substance=True),
    "ice": ObjectKind(portable=True, substance=True),
    "air": ObjectKind(substance=True),
    # creatures
    "dove": ObjectKind(portable=True, creature=True),
    "butterfly": ObjectKind(portable=True, creature=True),
    "turtle": ObjectKind(portable=True, creature=True),
    "frog": ObjectKind(portable=True, creature=True),
    "ant": ObjectKind(portable=True, creature=True),
    # plain objects used as find targets
    "key": ObjectKind(portable=True),
    "coin": ObjectKind(portable=True),
    "marble": ObjectKind(portable=True),
    "apple": ObjectKind(portable=True),
    "orange": ObjectKind(portable=True),
    "book": ObjectKind(portable=True, readable=True),
    "cup": ObjectKind(portable=True, container=True),
    # distractor pool
    "pencil": ObjectKind(portable=True),
    "rock": ObjectKind(portable=True),
    "sponge": ObjectKind(portable=True),
    "bucket": ObjectKind(portable=True, container=True),
    "mirror": ObjectKind(),
    "candle": ObjectKind(portable=True),
    "broom": ObjectKind(portable=True),
    "rope": ObjectKind(portable=True),
    "bell": ObjectKind(portable=True),
    "jar": ObjectKind(portable=True, container=True),
}

# Fixed furnishings per room; insertion order is the render order.
BASE_CONTENTS: dict[str, tuple[str, ...]] = {
    "hallway": ("picture",),
    "kitchen": ("counter", "stove", "freezer", "sink", "cup"),
    "living room": ("couch", "coffee table", "book"),
    "bedroom": ("bed", "closet",),
    "workshop": ("table",),
    "art studio": ("easel", "paint cup"),
    "greenhouse": ("flower pot", "shovel"),
    "bathroom": ("bathtub", "toilet"),
    "outside": ("air", "fire pit", "fountain", "ground", "axe"),
    "foundry": ("blast furnace",),
}

DISTRACTOR_POOL: tuple[str, ...] = (
    "pencil",
    "rock",
    "sponge",
    "bucket",
    "mirror",
    "candle",
    "broom",
    "rope",
    "bell",
    "jar",
)

# Target state reached by an active device heating/cooling a substance, and
# how substances respond to heat. Milestone predicates are the only physics.
FREEZE_TARGET = "solid"
HEAT_TARGETS: dict[str, str] = {
    "water": "gas",
    "milk": "gas",
    "orange juice": "gas",
    "paint": "gas",
    "chocolate": "liquid",
    "butter": "liquid",
    "wax": "liquid",
    "ice": "liquid",
}
INITIAL_PHASE: dict[str, str] = {
    "water": "liquid",
    "milk": "liquid",
    "orange juice": "liquid",
    "paint": "liquid",
    "chocolate": "solid",
    "butter": "solid",
    "wax": "solid",
    "ice": "solid",
}
HEATING_DEVICES = ("stove", "blast furnace")
COOLING_DEVICES = ("freezer",)

_VOWELS = "aeiou"


def with_article(name: str) -> str:
    """Render an object name A.2-style: creatures/things get an article,
    substances get the 'a substance called' phrasing, the agent none."""
    kind = OBJECTS.get(name)
    if kind is not None and kind.substance:
        return f"a substance called {name}"
    article = "an" if name[0].lower() in _VOWELS else "a"
    return f"{article} {name}"


def is_container(name: str) -> bool:
    kind = OBJECTS.get(name)
    return kind is not None and kind.container


def is_portable(name: str) -> bool:
    kind = OBJECTS.get(name)
    return kind is not None and kind.portable


def is_substance(name: str) -> bool:
    kind = OBJECTS.get(name)
    return kind is not None and kind.substance


def is_device(name: str) -> bool:
    kind = OBJECTS.get(name)
    return kind is not None and kind.device


def is_readable(name: str) -> bool:
    kind = OBJECTS.get(name)
    return kind is not None and kind.readable


def is_tool(name: str) -> bool:
    kind = OBJECTS.get(name)
    return kind is not None and kind.tool
