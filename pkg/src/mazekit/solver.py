"""Shortest-solution search over the extended maze state space.

BFS states carry (position, orientation, gems, hearts, monsters-defeated);
health is derived from the masks. Expansion order is fixed so ties always
break the same way.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass
from enum import Enum

from .errors import CapacityError, LimitError
from .maze import GEM_CAP, HEART_CAP, MONSTER_CAP, Maze
from .program import Action
from .interpreter import run_actions

EXPANSION_ORDER = (
    Action.MOVE_FORWARD,
    Action.TURN_LEFT,
    Action.TURN_RIGHT,
    Action.TURN_BACK,
    Action.ATTACK,
)

ORACLE_MAX_LEN = 14


class UnsolvableReason(Enum):
    NO_PATH = "NoPath"
    HEALTH_INFEASIBLE = "HealthInfeasible"


@dataclass(frozen=True)
class SolverResult:
    actions: tuple | None
    reason: UnsolvableReason | None
    explored: int
    elapsed: float

    @property
    def solvable(self):
        return self.actions is not None


@dataclass(frozen=True)
class _State:
    position: tuple
    orientation: object
    gems: int
    hearts: int
    defeated: int


def _derived_health(state: _State, m: Maze) -> int:
    health = m.initial_health + m.heart_heal * bin(state.hearts).count("1")
    for i, (_, kind) in enumerate(m.monsters):
        if state.defeated & (1 << i):
            health -= m.damage(kind)
    return health


def _start_state(m: Maze) -> _State:
    gems = 0
    hearts = 0
    if m.start in m.gems:
        gems = 1 << m.gem_index(m.start)
    if m.start in m.hearts:
        hearts = 1 << m.heart_index(m.start)
    return _State(m.start, m.start_orientation, gems, hearts, 0)


def _successor(state: _State, action: Action, m: Maze, check_health: bool):
    """Next state or None if the action is illegal here."""
    if action is Action.MOVE_FORWARD:
        dx, dy = state.orientation.delta
        front = (state.position[0] + dx, state.position[1] + dy)
        if not m.in_bounds(front) or front in m.obstacles:
            return None
        idx = m.monster_index(front)
        if idx is not None and not state.defeated & (1 << idx):
            return None
        gems, hearts = state.gems, state.hearts
        if front in m.gems:
            gems |= 1 << m.gem_index(front)
        if front in m.hearts:
            hearts |= 1 << m.heart_index(front)
        return _State(front, state.orientation, gems, hearts, state.defeated)
    if action is Action.TURN_LEFT:
        return _State(state.position, state.orientation.turn_left(),
                      state.gems, state.hearts, state.defeated)
    if action is Action.TURN_RIGHT:
        return _State(state.position, state.orientation.turn_right(),
                      state.gems, state.hearts, state.defeated)
    if action is Action.TURN_BACK:
        return _State(state.position, state.orientation.turn_back(),
                      state.gems, state.hearts, state.defeated)
    if action is Action.ATTACK:
        dx, dy = state.orientation.delta
        front = (state.position[0] + dx, state.position[1] + dy)
        idx = m.monster_index(front) if m.in_bounds(front) else None
        if idx is None or state.defeated & (1 << idx):
            return None
        if check_health:
            damage = m.damage(m.monster_at(front))
            if _derived_health(state, m) - damage <= 0:
                return None
        return _State(state.position, state.orientation, state.gems,
                      state.hearts, state.defeated | (1 << idx))
    raise TypeError(f"unknown action {action!r}")


def _bfs(m: Maze, check_health: bool):
    """Returns (actions or None, explored count)."""
    start = _start_state(m)
    goal_mask = m.full_gem_mask
    parent = {start: None}
    queue = deque([start])
    explored = 0
    while queue:
        state = queue.popleft()
        explored += 1
        for action in EXPANSION_ORDER:
            nxt = _successor(state, action, m, check_health)
            if nxt is None or nxt in parent:
                continue
            parent[nxt] = (state, action)
            if nxt.position == m.goal and nxt.gems == goal_mask:
                actions = []
                cur = nxt
                while parent[cur] is not None:
                    prev, act = parent[cur]
                    actions.append(act)
                    cur = prev
                return tuple(reversed(actions)), explored
            queue.append(nxt)
    return None, explored


def solve_low(m: Maze) -> SolverResult:
    """Shortest action sequence solving the maze, or an unsolvability verdict."""
    if len(m.gems) > GEM_CAP or len(m.hearts) > HEART_CAP or len(m.monsters) > MONSTER_CAP:
        raise CapacityError("entity caps exceeded")
    t0 = time.perf_counter()
    actions, explored = _bfs(m, check_health=True)
    if actions is not None:
        return SolverResult(actions, None, explored, time.perf_counter() - t0)
    unconstrained, more = _bfs(m, check_health=False)
    reason = (
        UnsolvableReason.HEALTH_INFEASIBLE
        if unconstrained is not None
        else UnsolvableReason.NO_PATH
    )
    return SolverResult(None, reason, explored + more, time.perf_counter() - t0)


def is_solvable(m: Maze):
    """(True, witness actions) or (False, UnsolvableReason)."""
    result = solve_low(m)
    if result.solvable:
        return True, result.actions
    return False, result.reason


def oracle_enumerate(m: Maze, max_len: int):
    """Test oracle: breadth-ordered enumeration over action sequences.

    Uses only the interpreter, never the solver's successor logic. Sequences
    whose execution fails are pruned (every extension fails at the same
    point), and sequences landing in an already-seen simulation state are
    dropped, which keeps the enumeration tractable without changing the
    first success found.
    """
    if max_len > ORACLE_MAX_LEN:
        raise LimitError(f"max_len {max_len} exceeds oracle cap {ORACLE_MAX_LEN}")
    frontier = [()]
    seen = set()
    for _ in range(max_len):
        nxt = []
        for prefix in frontier:
            for action in EXPANSION_ORDER:
                candidate = prefix + (action,)
                trace = run_actions(candidate, m)
                if trace.outcome.success:
                    return candidate
                if trace.outcome.reason.value in ("InvalidMove", "InvalidAttack", "Death"):
                    continue
                final = trace.states[-1]
                key = (
                    final.position,
                    final.orientation,
                    final.gems_collected,
                    final.hearts_collected,
                    final.monsters_defeated,
                )
                if key in seen:
                    continue
                seen.add(key)
                nxt.append(candidate)
        frontier = nxt
        if not frontier:
            break
    return None
