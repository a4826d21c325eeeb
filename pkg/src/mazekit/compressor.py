"""Turns a flat solver path into a compact loop/conditional program.

Pipeline: build a program tree from the action sequence, compress repeated
structure (verifying every rewrite by simulation and patching deviations),
then refine with variable neighborhood search. Compression preserves the
exact primitive trace; VNS only has to keep the program succeeding.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import MazeKitError, PatchFailure, PreconditionError
from .interpreter import (
    DEFAULT_FUEL,
    Outcome,
    eval_condition,
    execute,
    initial_state,
    run_actions,
    step,
    RunFailure,
    FailReason,
)
from .maze import Maze
from .program import (
    Action,
    ActionNode,
    Condition,
    ConditionKind,
    If,
    IfElse,
    Repeat,
    Sequence,
    While,
    block_count,
    seq,
    statements,
)
from .solver import SolverResult, UnsolvableReason, solve_low


class UnsolvableError(MazeKitError):
    def __init__(self, reason: UnsolvableReason):
        self.reason = reason
        super().__init__(f"maze is unsolvable: {reason.value}")


@dataclass(frozen=True)
class VnsConfig:
    max_iterations: int = 200
    no_improve_cap: int = 30
    neighborhoods: tuple = ("roll", "merge", "loop_sub", "hoist", "dead_turns")
    seed: int = 0


@dataclass(frozen=True)
class CompressionResult:
    program: object
    block_count: int
    exec_steps: int
    trace_equivalent: bool
    stages: dict = field(default_factory=dict)  # {"tree", "compressed", "refined"}


# -- trace helpers --------------------------------------------------------


def _runs_to(p, m: Maze, reference) -> bool:
    t = execute(p, m)
    return t.outcome.success and t.primitive_actions == tuple(reference)


def _succeeds(p, m: Maze):
    t = execute(p, m)
    return t if t.outcome.success else None


# -- structural helpers ---------------------------------------------------

_MOVE = ActionNode(Action.MOVE_FORWARD)
_PATH_AHEAD = Condition(ConditionKind.PATH_AHEAD)

_INVERSE_TURNS = {
    (Action.TURN_LEFT, Action.TURN_RIGHT),
    (Action.TURN_RIGHT, Action.TURN_LEFT),
    (Action.TURN_BACK, Action.TURN_BACK),
}


def _branches(node):
    if isinstance(node, (Repeat, While)):
        return (("body", node.body),)
    if isinstance(node, If):
        return (("then", node.then),)
    if isinstance(node, IfElse):
        return (("then", node.then), ("orelse", node.orelse))
    return ()


def _set_branch(node, branch, new):
    if isinstance(node, Repeat):
        return Repeat(node.count, new)
    if isinstance(node, While):
        return While(node.condition, new)
    if isinstance(node, If):
        return If(node.condition, new)
    if isinstance(node, IfElse):
        if branch == "then":
            return IfElse(node.condition, new, node.orelse)
        return IfElse(node.condition, node.then, new)
    raise TypeError(f"node has no {branch}: {node!r}")


def _variants(stmts, f):
    """All single-edit variants of a statement tuple, outermost first.

    f maps a statement tuple to an iterable of replacement tuples; edits are
    also attempted inside every nested block. Empty tuples are discarded.
    """
    for variant in f(stmts):
        if variant:
            yield variant
    for i, node in enumerate(stmts):
        for branch, sub in _branches(node):
            for subvar in _variants(sub, f):
                yield stmts[:i] + (_set_branch(node, branch, subvar),) + stmts[i + 1:]


def _program_variants(p, f):
    for variant in _variants(statements(p), f):
        yield seq(*variant)


def _actions_literal(actions):
    return tuple(ActionNode(a) for a in actions)


def _rolled_literal(actions):
    """Literal replacement for a patched span, re-rolling uniform runs."""
    actions = tuple(actions)
    if len(actions) >= 3 and len(set(actions)) == 1:
        return (Repeat(len(actions), (ActionNode(actions[0]),)),)
    return _actions_literal(actions)


# -- stage two: action sequence to program tree ---------------------------


def build_program_tree(actions, m: Maze):
    """Map an action sequence to a tree: uniform runs become Repeat nodes,
    attacks become monster-ahead conditionals, the rest stays literal."""
    trace = run_actions(actions, m)
    if not trace.outcome.success:
        raise PreconditionError(
            f"action sequence does not solve the maze: {trace.outcome}"
        )
    reference = trace.primitive_actions
    stmts = []
    i = 0
    while i < len(reference):
        a = reference[i]
        j = i
        while j < len(reference) and reference[j] == a:
            j += 1
        run = j - i
        if run >= 3:
            stmts.append(Repeat(run, (ActionNode(a),)))
        elif a is Action.ATTACK:
            # guard is vacuously true here (the attack succeeded), so the
            # conditional form is trace-equivalent
            for _ in range(run):
                stmts.append(If(Condition(ConditionKind.MONSTER_AHEAD),
                                (ActionNode(Action.ATTACK),)))
        else:
            stmts.extend([ActionNode(a)] * run)
        i = j
    tree = seq(*stmts)
    assert _runs_to(tree, m, reference)
    return tree


# -- patching -------------------------------------------------------------


class _SpanHalt(Exception):
    pass


class _SpanRun:
    """Executes a program recording, for every control node, the primitive
    action index intervals it emitted. Paths are ((index, branch), ...)."""

    def __init__(self, m, fuel=DEFAULT_FUEL):
        self.m = m
        self.fuel = fuel
        self.state = initial_state(m)
        self.actions = []
        self.intervals = {}

    def emit(self, action):
        if len(self.actions) >= self.fuel:
            raise _SpanHalt
        try:
            self.state = step(self.state, action, self.m)
        except RunFailure:
            raise _SpanHalt from None
        self.actions.append(action)
        if (
            self.state.position == self.m.goal
            and self.state.gems_collected == self.m.full_gem_mask
        ):
            raise _SpanHalt

    def exec_stmts(self, stmts, path):
        for i, node in enumerate(stmts):
            self.exec_node(node, path + ((i,),))

    def exec_node(self, node, path):
        if isinstance(node, ActionNode):
            self.emit(node.action)
            return
        if isinstance(node, Sequence):
            for i, child in enumerate(node.children):
                self.exec_node(child, path + ((i,),))
            return
        start = len(self.actions)
        try:
            if isinstance(node, Repeat):
                for _ in range(node.count):
                    self.exec_stmts(node.body, path + (("body",),))
            elif isinstance(node, While):
                while eval_condition(node.condition, self.state, self.m):
                    if len(self.actions) >= self.fuel:
                        raise _SpanHalt
                    before = len(self.actions)
                    self.exec_stmts(node.body, path + (("body",),))
                    if len(self.actions) == before:
                        raise _SpanHalt  # actionless iteration: stuck loop
            elif isinstance(node, If):
                if eval_condition(node.condition, self.state, self.m):
                    self.exec_stmts(node.then, path + (("then",),))
            elif isinstance(node, IfElse):
                branch = (
                    ("then", node.then)
                    if eval_condition(node.condition, self.state, self.m)
                    else ("orelse", node.orelse)
                )
                self.exec_stmts(branch[1], path + ((branch[0],),))
            else:
                raise TypeError(f"not a program node: {node!r}")
        finally:
            self.intervals.setdefault(path, []).append((start, len(self.actions)))


def _control_spans(p, m):
    run = _SpanRun(m)
    try:
        run.exec_stmts(statements(p), ())
    except _SpanHalt:
        pass
    return tuple(run.actions), run.intervals


def _replace_at(stmts, path, replacement):
    """Splice `replacement` statements in place of the node at `path`."""
    (index,) = path[0]
    if len(path) == 1:
        return stmts[:index] + tuple(replacement) + stmts[index + 1:]
    node = stmts[index]
    (branch,) = path[1]
    for name, sub in _branches(node):
        if name == branch:
            new_sub = _replace_at(sub, path[2:], replacement)
            if not new_sub:
                # a control node cannot keep an empty block; drop it entirely
                return stmts[:index] + stmts[index + 1:]
            return stmts[:index] + (_set_branch(node, branch, new_sub),) + stmts[index + 1:]
    raise KeyError(f"no branch {branch!r} on {node!r}")


def _first_deviation(actual, reference):
    for i, (a, b) in enumerate(zip(actual, reference)):
        if a != b:
            return i
    return min(len(actual), len(reference))


def patch(p, m: Maze, reference):
    """Restore strict trace equivalence by literalizing the smallest control
    node covering the first deviation; falls back to wider nodes and finally
    to the fully unrolled reference path."""
    reference = tuple(reference)
    if _runs_to(p, m, reference):
        return p
    actual, intervals = _control_spans(p, m)
    d = _first_deviation(actual, reference)
    candidates = []
    for path, spans in intervals.items():
        if len(spans) != 1:
            continue  # re-entrant node (inside an outer loop): not a safe target
        s, e = spans[0]
        if s <= d <= e:
            candidates.append((path, s))
    # innermost first: latest start, then deepest path
    candidates.sort(key=lambda item: (-item[1], -len(item[0])))
    top = statements(p)
    for path, s in candidates:
        for length in range(len(reference) - s + 1):
            literal = _rolled_literal(reference[s:s + length])
            try:
                candidate = seq(*_replace_at(top, path, literal))
            except MazeKitError:
                continue
            if _runs_to(candidate, m, reference):
                return candidate
    fallback = seq(*_rolled_literal(reference)) if reference else None
    if fallback is not None and _runs_to(fallback, m, reference):
        return fallback
    raise PatchFailure("no equivalence-restoring patch found")


# -- stage three: pattern compression -------------------------------------


def _roll_variants(stmts):
    """Adjacent-repetition rollings that reduce block count."""
    n = len(stmts)
    for i in range(n):
        for period in range(1, (n - i) // 2 + 1):
            unit = stmts[i:i + period]
            reps = 1
            while stmts[i + reps * period:i + (reps + 1) * period] == unit:
                reps += 1
            if reps < 2:
                continue
            unit_blocks = sum(block_count(x) for x in unit)
            if reps * unit_blocks <= 1 + unit_blocks:
                continue  # no structural gain (e.g. x;x -> repeat 2 {x})
            yield stmts[:i] + (Repeat(reps, unit),) + stmts[i + reps * period:]


def _merge_variants(stmts):
    """Fuse adjacent loops over the same body."""
    for i in range(len(stmts) - 1):
        a, b = stmts[i], stmts[i + 1]
        if isinstance(a, Repeat) and isinstance(b, Repeat) and a.body == b.body:
            yield stmts[:i] + (Repeat(a.count + b.count, a.body),) + stmts[i + 2:]
        elif isinstance(a, Repeat) and a.body == (b,):
            yield stmts[:i] + (Repeat(a.count + 1, a.body),) + stmts[i + 2:]
        elif isinstance(b, Repeat) and b.body == (a,):
            yield stmts[:i] + (Repeat(b.count + 1, b.body),) + stmts[i + 2:]


def _repeat_to_while_sites(stmts):
    """Variants converting one Repeat(k, move) into While(path_ahead, move)."""
    for i, node in enumerate(stmts):
        if isinstance(node, Repeat) and node.body == (_MOVE,):
            yield stmts[:i] + (While(_PATH_AHEAD, node.body),) + stmts[i + 1:]


def compress(tree, m: Maze, reference):
    """Roll repeated structure into loops, preferring While over Repeat for
    corridor runs, keeping the primitive trace exactly equal to reference."""
    reference = tuple(reference)
    if not _runs_to(tree, m, reference):
        raise PreconditionError("tree is not trace-equivalent to the reference path")
    current = tree
    for _ in range(200):  # fixpoint loop; each accepted edit shrinks or converts
        accepted = None
        for rolled in _program_variants(current, _roll_variants):
            if _runs_to(rolled, m, reference):
                accepted = rolled
                break
            patched = patch(rolled, m, reference)
            if block_count(patched) < block_count(current):
                accepted = patched
                break
        if accepted is not None:
            current = accepted
            continue
        merged = next(_program_variants(current, _merge_variants), None)
        if merged is not None and _runs_to(merged, m, reference):
            current = merged
            continue
        converted = None
        for candidate in _program_variants(current, _repeat_to_while_sites):
            if _runs_to(candidate, m, reference):
                converted = candidate
                break
        if converted is not None and converted != current:
            current = converted
            continue
        break
    assert _runs_to(current, m, reference)
    return current


# -- stage four: variable neighborhood search -----------------------------


def _unroll_variants(stmts):
    for i, node in enumerate(stmts):
        if isinstance(node, Repeat):
            yield stmts[:i] + node.body * node.count + stmts[i + 1:]


def _loop_sub_variants(stmts):
    for i, node in enumerate(stmts):
        if isinstance(node, Repeat):
            yield stmts[:i] + (While(_PATH_AHEAD, node.body),) + stmts[i + 1:]
        elif isinstance(node, While):
            for count in range(1, 21):
                yield stmts[:i] + (Repeat(count, node.body),) + stmts[i + 1:]


def _hoist_variants(stmts):
    for i, node in enumerate(stmts):
        if not isinstance(node, IfElse):
            continue
        if node.then[0] == node.orelse[0]:
            then, orelse = node.then[1:], node.orelse[1:]
            if then and orelse:
                yield stmts[:i] + (node.then[0], IfElse(node.condition, then, orelse)) + stmts[i + 1:]
        if node.then[-1] == node.orelse[-1]:
            then, orelse = node.then[:-1], node.orelse[:-1]
            if then and orelse:
                yield stmts[:i] + (IfElse(node.condition, then, orelse), node.then[-1]) + stmts[i + 1:]


def _dead_turn_variants(stmts):
    for i in range(len(stmts) - 1):
        a, b = stmts[i], stmts[i + 1]
        if (
            isinstance(a, ActionNode)
            and isinstance(b, ActionNode)
            and (a.action, b.action) in _INVERSE_TURNS
        ):
            yield stmts[:i] + stmts[i + 2:]
    # vacuous conditionals: unwrap a branch; kept only if still succeeding
    for i, node in enumerate(stmts):
        if isinstance(node, If):
            yield stmts[:i] + node.then + stmts[i + 1:]
        elif isinstance(node, IfElse):
            yield stmts[:i] + node.then + stmts[i + 1:]
            yield stmts[:i] + node.orelse + stmts[i + 1:]


_NEIGHBORHOODS = {
    "roll": (_roll_variants, _unroll_variants),
    "merge": (_merge_variants,),
    "loop_sub": (_loop_sub_variants,),
    "hoist": (_hoist_variants,),
    "dead_turns": (_dead_turn_variants,),
}


class _Evaluator:
    """Caches (valid, blocks, steps, repeat-count) per candidate program."""

    def __init__(self, m):
        self.m = m
        self.cache = {}

    def key(self, p):
        if p not in self.cache:
            trace = execute(p, self.m)
            if not trace.outcome.success:
                self.cache[p] = None
            else:
                self.cache[p] = (
                    block_count(p),
                    len(trace.primitive_actions),
                    _count_repeats(p),
                )
        return self.cache[p]


def _count_repeats(p):
    # tie-break metric: fewer Repeat nodes prefers the While form
    total = 0
    stack = [p]
    while stack:
        node = stack.pop()
        if isinstance(node, Repeat):
            total += 1
        if isinstance(node, Sequence):
            stack.extend(node.children)
        for _, sub in _branches(node):
            stack.extend(sub)
    return total


def _neighbors(p, names):
    for name in names:
        for gen in _NEIGHBORHOODS[name]:
            yield from _program_variants(p, gen)


def _local_search(p, cfg, evaluator):
    current = p
    current_key = evaluator.key(p)
    for _ in range(200):
        improved = False
        for candidate in _neighbors(current, cfg.neighborhoods):
            key = evaluator.key(candidate)
            if key is not None and key < current_key:
                current, current_key = candidate, key
                improved = True
                break  # first improvement
        if not improved:
            break
    return current


def vns_refine(p, m: Maze, cfg: VnsConfig | None = None):
    """Seeded VNS over program edits; never returns a worse program."""
    cfg = cfg or VnsConfig()
    trace = execute(p, m)
    if not trace.outcome.success:
        raise PreconditionError("program must execute to Success before refinement")
    rng = random.Random(cfg.seed)
    evaluator = _Evaluator(m)
    best = _local_search(p, cfg, evaluator)
    best_key = evaluator.key(best)
    iterations = 0
    no_improve = 0
    while iterations < cfg.max_iterations and no_improve < cfg.no_improve_cap:
        improved = False
        for name in cfg.neighborhoods:
            iterations += 1
            if iterations > cfg.max_iterations:
                break
            shakes = [
                c
                for c in _neighbors(best, (name,))
                if evaluator.key(c) is not None
            ]
            shaken = rng.choice(shakes) if shakes else best
            candidate = _local_search(shaken, cfg, evaluator)
            candidate_key = evaluator.key(candidate)
            if candidate_key < best_key:
                best, best_key = candidate, candidate_key
                improved = True
                break  # back to the first neighborhood
        if not improved:
            no_improve += 1
    return best


# -- full pipeline --------------------------------------------------------


def solve_high(m: Maze, cfg: VnsConfig | None = None) -> CompressionResult:
    """solve_low -> tree -> compress -> vns_refine, with stage snapshots."""
    low = solve_low(m)
    if not low.solvable:
        raise UnsolvableError(low.reason)
    reference = low.actions
    tree = build_program_tree(reference, m)
    compressed = compress(tree, m, reference)
    refined = vns_refine(compressed, m, cfg)
    trace = execute(refined, m)
    return CompressionResult(
        program=refined,
        block_count=block_count(refined),
        exec_steps=len(trace.primitive_actions),
        trace_equivalent=trace.primitive_actions == reference,
        stages={"tree": tree, "compressed": compressed, "refined": refined},
    )
