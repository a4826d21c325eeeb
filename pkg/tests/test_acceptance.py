"""Acceptance suite: one test per release criterion, one PASS line each."""

import json
import random
import time

from fastapi.testclient import TestClient

from mazekit import (
    Action,
    Direction,
    HintKind,
    Maze,
    MonsterKind,
    Repeat,
    Sequence,
    UnsolvableReason,
    VnsConfig,
    While,
    If,
    IfElse,
    block_count,
    build_program_tree,
    check_design,
    compress,
    execute,
    initial_state,
    new_session,
    oracle_enumerate,
    parse_maze,
    parse_program,
    print_program,
    request_hint,
    run_actions,
    serialize_maze,
    solve_high,
    solve_low,
    step,
    vns_refine,
)
from mazekit.chat import ChatResponse, ScriptedChatClient, ToolCall
from mazekit.scaffold import count_sentences
from mazekit.server import create_app
from mazekit.store import SessionStore
from helpers import grid, random_maze, random_program

MOVE = Action.MOVE_FORWARD


def _ok(name):
    print(f"[PASS] {name}")


def test_damage_table_fidelity():
    cases = [("b", 20), ("o", 40), ("k", 20), ("d", 60)]
    for token, damage in cases:
        m = grid(f"S {token} . G")
        after = step(initial_state(m), Action.ATTACK, m)
        assert m.initial_health - after.health == damage
    _ok("damage table fidelity (bat 20, ghost 40, skeleton archer 20, dragon 60)")


def test_success_rule():
    rng = random.Random(101)
    executions = 0
    while executions < 500:
        m = random_maze(rng)
        p = random_program(rng)
        trace = execute(p, m, fuel=400)
        final = trace.states[-1]
        at_goal_with_gems = (
            final.position == m.goal
            and final.gems_collected == m.full_gem_mask
        )
        assert trace.outcome.success == at_goal_with_gems
        assert all(s.health > 0 for s in trace.states)
        executions += 1
    _ok(f"success rule holds on {executions} random executions")


def test_bfs_optimality_vs_oracle():
    rng = random.Random(103)
    t0 = time.perf_counter()
    compared = 0
    attempts = 0
    while compared < 200:
        attempts += 1
        assert attempts < 5000
        m = random_maze(rng, max_side=5, max_gems=2, max_monsters=2, max_hearts=1)
        result = solve_low(m)
        if not result.solvable or len(result.actions) > 14:
            continue
        optimum = oracle_enumerate(m, 14)
        assert optimum is not None, serialize_maze(m)
        assert len(optimum) == len(result.actions), serialize_maze(m)
        compared += 1
    elapsed = time.perf_counter() - t0
    assert elapsed < 60
    _ok(f"BFS optimal vs oracle on {compared} mazes in {elapsed:.1f}s")


def _solvable_corpus(seed, count):
    rng = random.Random(seed)
    corpus = []
    while len(corpus) < count:
        m = random_maze(rng, max_side=5, max_gems=2, max_monsters=2, max_hearts=1)
        result = solve_low(m)
        if result.solvable and result.actions:
            corpus.append((m, result.actions))
    return corpus


def test_compression_soundness():
    for m, reference in _solvable_corpus(107, 60):
        tree = build_program_tree(reference, m)
        compressed = compress(tree, m, reference)
        for staged in (tree, compressed):
            trace = execute(staged, m)
            assert trace.outcome.success
            assert trace.primitive_actions == reference
        refined = vns_refine(compressed, m, VnsConfig(seed=0))
        assert execute(refined, m).outcome.success
        assert block_count(refined) <= len(reference)
    _ok("compression sound on 60 solvable corpus mazes")


def _count_loops(p):
    count = 0
    stack = [p]
    while stack:
        node = stack.pop()
        if isinstance(node, (Repeat, While)):
            count += 1
            stack.extend(node.body)
        elif isinstance(node, Sequence):
            stack.extend(node.children)
        elif isinstance(node, If):
            stack.extend(node.then)
        elif isinstance(node, IfElse):
            stack.extend(node.then + node.orelse)
    return count


def test_quiz_transformation():
    # corridor realizing the three-then-six step shape with a turn between
    text = "\n".join(["# # # G"] + ["# # # ."] * 5 + ["S . . ."])
    m = grid(text, facing=Direction.EAST)
    low = solve_low(m)
    assert low.actions == (
        (MOVE,) * 3 + (Action.TURN_LEFT,) + (MOVE,) * 6
    )
    t0 = time.perf_counter()
    result = solve_high(m)
    elapsed = time.perf_counter() - t0
    assert _count_loops(result.program) >= 2
    assert result.block_count <= 8
    assert execute(result.program, m).outcome.success
    assert elapsed < 1.0

    # same maze, but fed the quiz's own turn-right/turn-back variant
    quiz = (MOVE,) * 3 + (Action.TURN_RIGHT, Action.TURN_BACK) + (MOVE,) * 6 + (
        Action.TURN_RIGHT,
    )
    trace = run_actions(quiz, m)
    assert trace.outcome.success
    tree = build_program_tree(quiz, m)
    compressed = compress(tree, m, trace.primitive_actions)
    refined = vns_refine(compressed, m, VnsConfig(seed=0))
    assert _count_loops(refined) >= 2
    assert block_count(refined) <= 8
    assert execute(refined, m).outcome.success
    _ok(f"quiz transformation corridor compressed in {elapsed * 1000:.0f}ms")


def test_vns_monotonicity_and_determinism():
    corpus = _solvable_corpus(109, 50)
    for m, reference in corpus:
        tree = build_program_tree(reference, m)
        compressed = compress(tree, m, reference)
        refined = vns_refine(compressed, m, VnsConfig(seed=42))
        j_before = (
            block_count(compressed),
            len(execute(compressed, m).primitive_actions),
        )
        j_after = (
            block_count(refined),
            len(execute(refined, m).primitive_actions),
        )
        assert j_after <= j_before
        again = vns_refine(compressed, m, VnsConfig(seed=42))
        assert print_program(again) == print_program(refined)
    _ok("VNS monotone and seed-deterministic on 50 corpus mazes")


def test_staged_disclosure_property():
    expected = [
        HintKind.LOW_EFFICIENCY_STEPS,
        HintKind.TRANSFORMATION_HINTS,
        HintKind.HIGH_EFFICIENCY_PROGRAM,
    ]
    rng = random.Random(113)
    mazes = [m for m, _ in _solvable_corpus(127, 10)]
    sessions = [(new_session(m), m) for m in mazes for _ in range(10)]
    live = list(range(len(sessions)))
    requests = 0
    while live and requests < 400:
        idx = rng.choice(live)
        session, m = sessions[idx]
        session, payload = request_hint(session, m)
        sessions[idx] = (session, m)
        requests += 1
        issued = [p.kind for p in session.payloads]
        assert issued == expected[: len(issued)]
        assert count_sentences(payload.rendered_text) <= 10
        if payload.kind is HintKind.HIGH_EFFICIENCY_PROGRAM:
            assert payload.content == print_program(solve_high(m).program)
        if rng.random() < 0.1:
            live.remove(idx)
    assert requests >= 300
    _ok(f"staged disclosure prefix property over {requests} interleaved requests")


def test_round_trips():
    rng = random.Random(131)
    for _ in range(100):
        p = random_program(rng)
        assert parse_program(print_program(p)) == p
    for _ in range(100):
        m = random_maze(rng)
        assert parse_maze(serialize_maze(m)) == m
    # order-insensitive canonical form
    m = grid("S g . g G")
    doc = json.loads(serialize_maze(m))
    doc["gems"].reverse()
    assert serialize_maze(parse_maze(json.dumps(doc))) == serialize_maze(m)
    _ok("100 program and 100 maze round-trips, canonical order-insensitive")


def test_design_check_fixtures():
    solvable_8x8 = grid(
        """
        S . g . . . . .
        . # . . d . . .
        . . b . . # . .
        . . . . . . . .
        . g . # h . . .
        . . . . . . . .
        # . . . . . . .
        . . . . . . . G
        """
    )
    assert check_design(solvable_8x8).passed

    small = check_design(grid("S . G\n. . .\n. . ."))
    assert not next(c for c in small.checks if c.name == "size").passed

    walled = grid(
        "\n".join(
            ["S . . . . . . ."]
            + [". . . . . . . ."] * 5
            + [". . . . . . # #", ". . . . . . # G"]
        )
    )
    verdict = next(
        c for c in check_design(walled).checks if c.name == "solvable"
    )
    assert not verdict.passed and "NoPath" in verdict.detail

    # only route runs through two dragons; 100 health, no hearts
    infeasible = grid(
        "\n".join(
            ["S d d . . . . G"] + ["# # # # # # # #"] * 7
        )
    )
    assert solve_low(infeasible).reason is UnsolvableReason.HEALTH_INFEASIBLE
    verdict = next(
        c for c in check_design(infeasible).checks if c.name == "solvable"
    )
    assert not verdict.passed and "HealthInfeasible" in verdict.detail
    _ok("design check fixtures: pass, size fail, NoPath, HealthInfeasible")


def test_service_parity_and_gating():
    rng = random.Random(137)
    client = TestClient(create_app(SessionStore()))
    done = 0
    while done < 20:
        m = random_maze(rng)
        expected = solve_low(m)
        if not expected.solvable:
            continue
        maze_id = f"fixture{done}"
        response = client.put(f"/mazes/{maze_id}", content=serialize_maze(m))
        assert response.status_code == 200
        assert response.text == serialize_maze(m)
        low = client.post(f"/mazes/{maze_id}/solve?mode=low").json()
        assert low["actions"] == [a.value for a in expected.actions]
        high = client.post(f"/mazes/{maze_id}/solve?mode=high").json()
        assert high["program"] == print_program(solve_high(m).program)
        done += 1

    # scripted model begs for the final program at every stage < 2
    trivial = grid("S . . . . G")
    program_text = print_program(solve_high(trivial).program)
    script = ScriptedChatClient(
        [
            ChatResponse(tool_calls=(ToolCall("solve_high"),)),
            ChatResponse(text="Focus on the route, not the answer."),
        ]
        * 4
    )
    gated = TestClient(create_app(SessionStore(), chat_client=script))
    gated.put("/mazes/m", content=serialize_maze(trivial))
    sid = gated.post("/sessions", json={"maze_id": "m"}).json()["session_id"]
    leaks = 0
    for stage in range(2):
        body = gated.post(f"/sessions/{sid}/chat", json={"text": "program?"})
        if program_text in body.text:
            leaks += 1
        gated.post(f"/sessions/{sid}/hint")  # advance one stage
    assert leaks == 0
    _ok("HTTP parity on 20 fixtures, zero stage-3 leaks below stage 2")
