"""Maze data model and the JSON document format.

Grid coordinates are (x, y) with (0, 0) in the top-left corner; North
decreases y. Gems, hearts and monsters are kept in (y, x)-sorted tuples so
that each entity has a stable index for bitmask bookkeeping.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from enum import Enum

from .errors import ParseError, SchemaError

GEM_CAP = 16
HEART_CAP = 8
MONSTER_CAP = 16

DEFAULT_INITIAL_HEALTH = 100
DEFAULT_HEART_HEAL = 20


class Direction(Enum):
    NORTH = "N"
    EAST = "E"
    SOUTH = "S"
    WEST = "W"

    @property
    def delta(self):
        return _DELTAS[self]

    def turn_right(self):
        return _ORDER[(_ORDER.index(self) + 1) % 4]

    def turn_left(self):
        return _ORDER[(_ORDER.index(self) - 1) % 4]

    def turn_back(self):
        return _ORDER[(_ORDER.index(self) + 2) % 4]


_ORDER = [Direction.NORTH, Direction.EAST, Direction.SOUTH, Direction.WEST]
_DELTAS = {
    Direction.NORTH: (0, -1),
    Direction.EAST: (1, 0),
    Direction.SOUTH: (0, 1),
    Direction.WEST: (-1, 0),
}


class MonsterKind(Enum):
    BAT = "bat"
    GHOST = "ghost"
    SKELETON_ARCHER = "skeleton_archer"
    DRAGON = "dragon"


DEFAULT_DAMAGE = {
    MonsterKind.BAT: 20,
    MonsterKind.GHOST: 40,
    MonsterKind.SKELETON_ARCHER: 20,
    MonsterKind.DRAGON: 60,
}


def _sorted_cells(cells):
    return tuple(sorted(set(cells), key=lambda c: (c[1], c[0])))


@dataclass(frozen=True)
class Maze:
    width: int
    height: int
    start: tuple[int, int]
    start_orientation: Direction
    goal: tuple[int, int]
    obstacles: frozenset = frozenset()
    gems: tuple = ()
    hearts: tuple = ()
    monsters: tuple = ()  # ((x, y), MonsterKind) pairs, (y, x)-sorted
    initial_health: int = DEFAULT_INITIAL_HEALTH
    heart_heal: int = DEFAULT_HEART_HEAL
    damage_overrides: tuple = ()  # (MonsterKind, damage) pairs, sorted by kind

    def __post_init__(self):
        object.__setattr__(self, "obstacles", frozenset(self.obstacles))
        object.__setattr__(self, "gems", _sorted_cells(self.gems))
        object.__setattr__(self, "hearts", _sorted_cells(self.hearts))
        object.__setattr__(
            self,
            "monsters",
            tuple(sorted(self.monsters, key=lambda e: (e[0][1], e[0][0]))),
        )
        object.__setattr__(
            self,
            "damage_overrides",
            tuple(sorted(self.damage_overrides, key=lambda kv: kv[0].value)),
        )
        self._validate()

    # -- validation -------------------------------------------------------

    def _validate(self):
        if self.width < 1 or self.height < 1:
            raise SchemaError(f"grid size must be positive, got {self.width}x{self.height}")
        for name, cells in (
            ("obstacles", self.obstacles),
            ("gems", self.gems),
            ("hearts", self.hearts),
            ("monsters", [c for c, _ in self.monsters]),
            ("start", [self.start]),
            ("goal", [self.goal]),
        ):
            for cell in cells:
                if not self.in_bounds(cell):
                    raise SchemaError(f"{name}: coordinate {cell} out of bounds")
        if self.start == self.goal:
            raise SchemaError(f"start and goal coincide at {self.start}")
        occupied = {}
        for name, cells in (
            ("obstacle", self.obstacles),
            ("gem", self.gems),
            ("heart", self.hearts),
            ("monster", [c for c, _ in self.monsters]),
        ):
            for cell in cells:
                if cell in occupied:
                    raise SchemaError(
                        f"cell {cell} holds both {occupied[cell]} and {name}"
                    )
                occupied[cell] = name
        for label, cell in (("start", self.start), ("goal", self.goal)):
            if occupied.get(cell) in ("obstacle", "monster"):
                raise SchemaError(f"{label} cell {cell} holds a {occupied[cell]}")
        if len(self.gems) > GEM_CAP:
            raise SchemaError(f"gems: {len(self.gems)} exceeds cap {GEM_CAP}")
        if len(self.hearts) > HEART_CAP:
            raise SchemaError(f"hearts: {len(self.hearts)} exceeds cap {HEART_CAP}")
        if len(self.monsters) > MONSTER_CAP:
            raise SchemaError(f"monsters: {len(self.monsters)} exceeds cap {MONSTER_CAP}")
        if len(set(c for c, _ in self.monsters)) != len(self.monsters):
            raise SchemaError("monsters: duplicate coordinate")
        if self.initial_health <= 0:
            raise SchemaError(f"initial_health must be > 0, got {self.initial_health}")
        if self.heart_heal < 0:
            raise SchemaError(f"heart_heal must be >= 0, got {self.heart_heal}")
        for kind, dmg in self.damage_overrides:
            if dmg <= 0:
                raise SchemaError(f"damage override for {kind.value} must be > 0")

    # -- queries ----------------------------------------------------------

    def in_bounds(self, cell):
        x, y = cell
        return 0 <= x < self.width and 0 <= y < self.height

    def damage(self, kind: MonsterKind) -> int:
        for k, dmg in self.damage_overrides:
            if k is kind:
                return dmg
        return DEFAULT_DAMAGE[kind]

    def gem_index(self, cell):
        return self.gems.index(cell)

    def heart_index(self, cell):
        return self.hearts.index(cell)

    def monster_index(self, cell):
        for i, (c, _) in enumerate(self.monsters):
            if c == cell:
                return i
        return None

    def monster_at(self, cell):
        for c, kind in self.monsters:
            if c == cell:
                return kind
        return None

    @property
    def full_gem_mask(self):
        return (1 << len(self.gems)) - 1


# -- document format ------------------------------------------------------


def _cell_list(raw, name):
    cells = []
    for item in raw:
        if not isinstance(item, dict) or "x" not in item or "y" not in item:
            raise SchemaError(f"{name}: entries need x and y, got {item!r}")
        cells.append((int(item["x"]), int(item["y"])))
    if len(set(cells)) != len(cells):
        dup = next(c for c in cells if cells.count(c) > 1)
        raise SchemaError(f"{name}: duplicate coordinate {dup}")
    return cells


def parse_maze(document: str) -> Maze:
    """Parse a UTF-8 JSON maze document into a validated Maze."""
    try:
        raw = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from exc
    if not isinstance(raw, dict):
        raise SchemaError("maze document must be a JSON object")
    for key in ("width", "height", "start", "goal"):
        if key not in raw:
            raise SchemaError(f"missing required field: {key}")
    start_raw = raw["start"]
    if not isinstance(start_raw, dict) or not {"x", "y", "dir"} <= start_raw.keys():
        raise SchemaError("start: needs x, y and dir")
    try:
        orientation = Direction(start_raw["dir"])
    except ValueError:
        raise SchemaError(f"start: unknown dir {start_raw['dir']!r}") from None
    goal_raw = raw["goal"]
    if not isinstance(goal_raw, dict) or not {"x", "y"} <= goal_raw.keys():
        raise SchemaError("goal: needs x and y")

    monsters = []
    for item in raw.get("monsters", []):
        if not isinstance(item, dict) or not {"x", "y", "kind"} <= item.keys():
            raise SchemaError(f"monsters: entries need x, y and kind, got {item!r}")
        try:
            kind = MonsterKind(item["kind"])
        except ValueError:
            raise SchemaError(f"monsters: unknown kind {item['kind']!r} at "
                              f"({item['x']}, {item['y']})") from None
        monsters.append(((int(item["x"]), int(item["y"])), kind))

    config = raw.get("config", {})
    if not isinstance(config, dict):
        raise SchemaError("config must be an object")
    overrides = []
    for key, dmg in config.get("damage_overrides", {}).items():
        try:
            kind = MonsterKind(key)
        except ValueError:
            raise SchemaError(f"config.damage_overrides: unknown kind {key!r}") from None
        overrides.append((kind, int(dmg)))

    return Maze(
        width=int(raw["width"]),
        height=int(raw["height"]),
        start=(int(start_raw["x"]), int(start_raw["y"])),
        start_orientation=orientation,
        goal=(int(goal_raw["x"]), int(goal_raw["y"])),
        obstacles=frozenset(_cell_list(raw.get("obstacles", []), "obstacles")),
        gems=_cell_list(raw.get("gems", []), "gems"),
        hearts=_cell_list(raw.get("hearts", []), "hearts"),
        monsters=monsters,
        initial_health=int(config.get("initial_health", DEFAULT_INITIAL_HEALTH)),
        heart_heal=int(config.get("heart_heal", DEFAULT_HEART_HEAL)),
        damage_overrides=overrides,
    )


def serialize_maze(m: Maze) -> str:
    """Canonical JSON for a maze: fixed key order, entity lists (y, x)-sorted.

    Equal mazes serialize to identical bytes; parse_maze round-trips.
    """
    doc = {
        "width": m.width,
        "height": m.height,
        "start": {"x": m.start[0], "y": m.start[1], "dir": m.start_orientation.value},
        "goal": {"x": m.goal[0], "y": m.goal[1]},
        "obstacles": [{"x": x, "y": y} for x, y in _sorted_cells(m.obstacles)],
        "gems": [{"x": x, "y": y} for x, y in m.gems],
        "hearts": [{"x": x, "y": y} for x, y in m.hearts],
        "monsters": [
            {"x": c[0], "y": c[1], "kind": kind.value} for c, kind in m.monsters
        ],
        "config": {
            "initial_health": m.initial_health,
            "heart_heal": m.heart_heal,
            "damage_overrides": {k.value: d for k, d in m.damage_overrides},
        },
    }
    return json.dumps(doc, indent=2) + "\n"


def maze_hash(m: Maze) -> str:
    """Content hash of the canonical serialization; binds hint sessions."""
    return hashlib.sha256(serialize_maze(m).encode()).hexdigest()
