"""Pedagogical layer: design checks, staged hint sessions, hint rendering.

Hints unfold over three requests per session: the step-by-step solution,
transformation hints pointing at patterns in it, and finally the compact
program. Sessions are bound to a maze snapshot hash so edits invalidate them.
"""

from __future__ import annotations

import re
import time
import uuid
from dataclasses import dataclass, field, replace
from enum import Enum

from .errors import StaleSessionError
from .interpreter import run_actions
from .maze import Maze, maze_hash
from .program import Action, print_program
from .compressor import UnsolvableError, VnsConfig, solve_high
from .solver import solve_low

MAX_SENTENCES = 10


# -- design checks --------------------------------------------------------


@dataclass(frozen=True)
class DesignRequirements:
    required_width: int = 8
    required_height: int = 8
    min_gems: int = 1
    min_monsters: int = 2
    min_asset_kinds: int = 3
    must_be_solvable: bool = True


@dataclass(frozen=True)
class DesignCheck:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class DesignReport:
    checks: tuple
    passed: bool
    witness_path_length: int | None = None
    witness_health_margin: int | None = None


def _asset_kinds(m: Maze) -> int:
    kinds = 0
    kinds += 1 if m.gems else 0
    kinds += 1 if m.hearts else 0
    kinds += 1 if m.obstacles else 0
    kinds += len({kind for _, kind in m.monsters})
    return kinds


def check_design(m: Maze, req: DesignRequirements | None = None) -> DesignReport:
    """Evaluate every lesson requirement; failures do not short-circuit."""
    req = req or DesignRequirements()
    checks = []
    size_ok = m.width == req.required_width and m.height == req.required_height
    checks.append(DesignCheck(
        "size", size_ok,
        f"expected {req.required_width}x{req.required_height}, "
        f"found {m.width}x{m.height}",
    ))
    checks.append(DesignCheck(
        "min_gems", len(m.gems) >= req.min_gems,
        f"expected >= {req.min_gems} gems, found {len(m.gems)}",
    ))
    checks.append(DesignCheck(
        "min_monsters", len(m.monsters) >= req.min_monsters,
        f"expected >= {req.min_monsters} monsters, found {len(m.monsters)}",
    ))
    kinds = _asset_kinds(m)
    checks.append(DesignCheck(
        "min_asset_kinds", kinds >= req.min_asset_kinds,
        f"expected >= {req.min_asset_kinds} distinct asset kinds, found {kinds}",
    ))
    path_length = None
    health_margin = None
    if req.must_be_solvable:
        result = solve_low(m)
        if result.solvable:
            trace = run_actions(result.actions, m)
            path_length = len(result.actions)
            health_margin = min(s.health for s in trace.states)
            checks.append(DesignCheck(
                "solvable", True,
                f"solvable in {path_length} steps",
            ))
        else:
            checks.append(DesignCheck(
                "solvable", False, f"unsolvable: {result.reason.value}",
            ))
    return DesignReport(
        checks=tuple(checks),
        passed=all(c.passed for c in checks),
        witness_path_length=path_length,
        witness_health_margin=health_margin,
    )


# -- pattern findings -----------------------------------------------------


@dataclass(frozen=True)
class Finding:
    kind: str  # "run" | "repeat" | "attack"
    start: int
    length: int
    actions: tuple

    @property
    def count(self):
        # for "repeat": how many times the subsequence occurs back to back
        return self.length // len(self.actions) if self.actions else 0


def pattern_report(actions) -> tuple:
    """Maximal uniform runs, adjacent repeated subsequences, and attack
    positions, ordered by start index."""
    actions = tuple(actions)
    if not actions:
        raise ValueError("empty action list")
    findings = []
    i = 0
    while i < len(actions):
        j = i
        while j < len(actions) and actions[j] == actions[i]:
            j += 1
        if j - i >= 2:
            findings.append(Finding("run", i, j - i, (actions[i],)))
        i = j
    i = 0
    while i < len(actions):
        best = None
        for period in range(2, (len(actions) - i) // 2 + 1):
            unit = actions[i:i + period]
            reps = 1
            while actions[i + reps * period:i + (reps + 1) * period] == unit:
                reps += 1
            if reps >= 2 and (best is None or reps * period > best[0] * best[1]):
                best = (reps, period)
        if best is not None:
            reps, period = best
            findings.append(
                Finding("repeat", i, reps * period, actions[i:i + period])
            )
            i += reps * period
        else:
            i += 1
    for idx, action in enumerate(actions):
        if action is Action.ATTACK:
            findings.append(Finding("attack", idx, 1, (action,)))
    findings.sort(key=lambda f: (f.start, f.kind))
    return tuple(findings)


# -- hint sessions --------------------------------------------------------


class HintKind(Enum):
    LOW_EFFICIENCY_STEPS = "steps"
    TRANSFORMATION_HINTS = "transformation"
    HIGH_EFFICIENCY_PROGRAM = "program"


_STAGE_KINDS = {
    1: HintKind.LOW_EFFICIENCY_STEPS,
    2: HintKind.TRANSFORMATION_HINTS,
    3: HintKind.HIGH_EFFICIENCY_PROGRAM,
}


@dataclass(frozen=True)
class HintPayload:
    stage: int
    kind: HintKind
    content: object
    rendered_text: str


@dataclass(frozen=True)
class HintSession:
    session_id: str
    maze_snapshot: str
    stage: int = 0
    payloads: tuple = ()
    created: float = field(default_factory=time.time)
    updated: float = field(default_factory=time.time)


def new_session(m: Maze) -> HintSession:
    return HintSession(session_id=uuid.uuid4().hex, maze_snapshot=maze_hash(m))


def request_hint(s: HintSession, m: Maze, cfg: VnsConfig | None = None):
    """Advance the staged-disclosure machine by one step (saturating at 3).

    Returns (updated session, payload). Raises StaleSessionError when the
    maze no longer matches the session snapshot and lets solver verdicts
    surface unchanged.
    """
    if maze_hash(m) != s.maze_snapshot:
        raise StaleSessionError(
            f"maze changed since session {s.session_id} was opened"
        )
    if s.stage >= 3:
        return replace(s, updated=time.time()), s.payloads[-1]
    stage = s.stage + 1
    kind = _STAGE_KINDS[stage]
    if kind is HintKind.LOW_EFFICIENCY_STEPS:
        result = solve_low(m)
        if not result.solvable:
            raise UnsolvableError(result.reason)
        content = [a.value for a in result.actions]
    elif kind is HintKind.TRANSFORMATION_HINTS:
        result = solve_low(m)
        findings = pattern_report(result.actions)
        content = [
            {
                "kind": f.kind,
                "start": f.start,
                "length": f.length,
                "actions": [a.value for a in f.actions],
            }
            for f in findings
        ]
    else:
        high = solve_high(m, cfg)
        content = print_program(high.program)
    payload = HintPayload(
        stage=stage,
        kind=kind,
        content=content,
        rendered_text=render_hint_text_parts(stage, kind, content),
    )
    session = replace(
        s, stage=stage, payloads=s.payloads + (payload,), updated=time.time()
    )
    return session, payload


# -- rendering ------------------------------------------------------------


def count_sentences(text: str) -> int:
    return len(re.findall(r"[.!?]+", text))


def render_hint_text_parts(stage: int, kind: HintKind, content) -> str:
    if kind is HintKind.LOW_EFFICIENCY_STEPS:
        steps = ", ".join(content)
        sentences = [
            f"Your maze can be solved in {len(content)} steps.",
            f"The full step list is: {steps}.",
            "Try walking the route in your head one segment at a time.",
            "Which parts of this route could you group into smaller chunks?",
        ]
    elif kind is HintKind.TRANSFORMATION_HINTS:
        sentences = ["Look closely at the step list from the previous hint."]
        described = 0
        for f in content:
            if described >= 6:
                break
            acts = ", ".join(f["actions"])
            if f["kind"] == "run":
                sentences.append(
                    f"Steps {f['start'] + 1} to {f['start'] + f['length']} repeat "
                    f"{acts} {f['length']} times in a row."
                )
            elif f["kind"] == "repeat":
                reps = f["length"] // len(f["actions"])
                sentences.append(
                    f"Starting at step {f['start'] + 1}, the pattern [{acts}] "
                    f"occurs {reps} times back to back."
                )
            else:
                sentences.append(
                    f"Step {f['start'] + 1} is an attack, which only works when "
                    f"a monster is directly ahead."
                )
            described += 1
        sentences.append(
            "Which while, repeat or if blocks could replace those patterns?"
        )
    else:
        program_text = content.rstrip("\n")
        sentences = [
            "Here is a compact program that solves your maze.",
            f"```\n{program_text}\n```",
            "Compare it with your own step list and spot where each loop came from.",
        ]
    text = "\n".join(sentences)
    assert count_sentences(text) <= MAX_SENTENCES
    return text


def render_hint_text(payload: HintPayload) -> str:
    return render_hint_text_parts(payload.stage, payload.kind, payload.content)
