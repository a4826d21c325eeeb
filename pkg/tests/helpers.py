"""Shared maze builders and corpus generators for the test suite."""

from __future__ import annotations

import random

from mazekit import (
    Action,
    ActionNode,
    Condition,
    ConditionKind,
    Direction,
    If,
    IfElse,
    Maze,
    MonsterKind,
    Repeat,
    Sequence,
    While,
    seq,
)

TOKEN_MONSTERS = {
    "b": MonsterKind.BAT,
    "o": MonsterKind.GHOST,
    "k": MonsterKind.SKELETON_ARCHER,
    "d": MonsterKind.DRAGON,
}


def grid(text: str, facing=Direction.EAST, **config) -> Maze:
    """Build a maze from rows of space-separated tokens.

    S start, G goal, # obstacle, . free, g gem, h heart,
    b bat, o ghost, k skeleton archer, d dragon.
    """
    if isinstance(facing, str):
        facing = Direction(facing)
    rows = [line.split() for line in text.strip().splitlines()]
    width = len(rows[0])
    height = len(rows)
    start = goal = None
    obstacles, gems, hearts, monsters = [], [], [], []
    for y, row in enumerate(rows):
        for x, token in enumerate(row):
            if token == "S":
                start = (x, y)
            elif token == "G":
                goal = (x, y)
            elif token == "#":
                obstacles.append((x, y))
            elif token == "g":
                gems.append((x, y))
            elif token == "h":
                hearts.append((x, y))
            elif token in TOKEN_MONSTERS:
                monsters.append(((x, y), TOKEN_MONSTERS[token]))
            elif token != ".":
                raise ValueError(f"unknown token {token!r}")
    return Maze(
        width=width,
        height=height,
        start=start,
        start_orientation=facing,
        goal=goal,
        obstacles=frozenset(obstacles),
        gems=tuple(gems),
        hearts=tuple(hearts),
        monsters=tuple(monsters),
        **config,
    )


def random_maze(rng: random.Random, max_side=5, max_gems=2, max_monsters=2,
                max_hearts=1) -> Maze:
    """Small random maze honoring all structural invariants."""
    while True:
        width = rng.randint(2, max_side)
        height = rng.randint(1, max_side)
        cells = [(x, y) for x in range(width) for y in range(height)]
        if len(cells) < 3:
            continue
        rng.shuffle(cells)
        start = cells.pop()
        goal = cells.pop()
        n_obstacles = rng.randint(0, max(0, len(cells) // 3))
        n_gems = rng.randint(0, min(max_gems, len(cells) - n_obstacles))
        remaining = len(cells) - n_obstacles - n_gems
        n_monsters = rng.randint(0, min(max_monsters, max(0, remaining)))
        remaining -= n_monsters
        n_hearts = rng.randint(0, min(max_hearts, max(0, remaining)))
        obstacles = [cells.pop() for _ in range(n_obstacles)]
        gems = [cells.pop() for _ in range(n_gems)]
        monsters = [
            (cells.pop(), rng.choice(list(MonsterKind))) for _ in range(n_monsters)
        ]
        hearts = [cells.pop() for _ in range(n_hearts)]
        return Maze(
            width=width,
            height=height,
            start=start,
            start_orientation=rng.choice(list(Direction)),
            goal=goal,
            obstacles=frozenset(obstacles),
            gems=tuple(gems),
            hearts=tuple(hearts),
            monsters=tuple(monsters),
        )


_ACTIONS = list(Action)
_CONDITIONS = list(ConditionKind)


def random_program(rng: random.Random, max_depth=3, max_len=4):
    stmts = tuple(
        _random_node(rng, max_depth) for _ in range(rng.randint(1, max_len))
    )
    return seq(*stmts)


def _random_node(rng, depth):
    choices = ["action"]
    if depth > 1:
        choices += ["repeat", "while", "if", "ifelse"]
    kind = rng.choice(choices)
    if kind == "action":
        return ActionNode(rng.choice(_ACTIONS))
    body = tuple(
        _random_node(rng, depth - 1) for _ in range(rng.randint(1, 3))
    )
    cond = Condition(rng.choice(_CONDITIONS), rng.random() < 0.3)
    if kind == "repeat":
        return Repeat(rng.randint(1, 5), body)
    if kind == "while":
        return While(cond, body)
    if kind == "if":
        return If(cond, body)
    orelse = tuple(
        _random_node(rng, depth - 1) for _ in range(rng.randint(1, 3))
    )
    return IfElse(cond, body, orelse)
