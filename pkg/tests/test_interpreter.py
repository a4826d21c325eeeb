import random

import pytest

from mazekit import (
    Action,
    Condition,
    ConditionKind,
    Direction,
    FailReason,
    RunFailure,
    eval_condition,
    execute,
    initial_state,
    parse_program,
    run_actions,
    step,
)
from helpers import grid, random_maze, random_program

MOVE = Action.MOVE_FORWARD


def final_health(trace):
    return trace.states[-1].health


class TestConditions:
    def test_monster_ahead_true(self):
        m = grid("S b . G")
        assert eval_condition(Condition(ConditionKind.MONSTER_AHEAD),
                              initial_state(m), m)

    def test_path_ahead_false_at_boundary(self):
        m = grid("S . G", facing=Direction.NORTH)
        assert not eval_condition(Condition(ConditionKind.PATH_AHEAD),
                                  initial_state(m), m)

    def test_gems_remaining_false_with_no_gems(self):
        m = grid("S . G")
        assert not eval_condition(Condition(ConditionKind.GEMS_REMAINING),
                                  initial_state(m), m)

    def test_negation(self):
        m = grid("S . G")
        state = initial_state(m)
        cond = Condition(ConditionKind.AT_GOAL, negated=True)
        assert eval_condition(cond, state, m)

    def test_purity(self):
        m = grid("S b g G")
        state = initial_state(m)
        for kind in ConditionKind:
            eval_condition(Condition(kind), state, m)
        assert state == initial_state(m)

    def test_defeated_monster_opens_path(self):
        m = grid("S b . G")
        state = step(initial_state(m), Action.ATTACK, m)
        assert eval_condition(Condition(ConditionKind.PATH_AHEAD), state, m)
        assert not eval_condition(Condition(ConditionKind.MONSTER_AHEAD), state, m)


class TestStep:
    def test_attack_dragon_costs_60(self):
        m = grid("S d . G")
        state = step(initial_state(m), Action.ATTACK, m)
        assert state.health == 40
        assert state.monsters_defeated == 1

    def test_attack_dragon_at_50_health_is_death(self):
        m = grid("S d . G", initial_health=50)
        with pytest.raises(RunFailure) as excinfo:
            step(initial_state(m), Action.ATTACK, m)
        assert excinfo.value.reason is FailReason.DEATH

    def test_attack_exactly_lethal_is_death(self):
        # health must stay strictly positive
        m = grid("S d . G", initial_health=60)
        with pytest.raises(RunFailure) as excinfo:
            step(initial_state(m), Action.ATTACK, m)
        assert excinfo.value.reason is FailReason.DEATH

    def test_turn_back_reverses(self):
        m = grid("S . G")
        state = step(initial_state(m), Action.TURN_BACK, m)
        assert state.orientation is Direction.WEST
        assert state.position == m.start

    def test_move_into_monster_fails(self):
        m = grid("S b . G")
        with pytest.raises(RunFailure) as excinfo:
            step(initial_state(m), MOVE, m)
        assert excinfo.value.reason is FailReason.INVALID_MOVE

    def test_move_off_grid_fails(self):
        m = grid("S . G", facing=Direction.WEST)
        with pytest.raises(RunFailure):
            step(initial_state(m), MOVE, m)

    def test_attack_without_target_fails(self):
        m = grid("S . G")
        with pytest.raises(RunFailure) as excinfo:
            step(initial_state(m), Action.ATTACK, m)
        assert excinfo.value.reason is FailReason.INVALID_ATTACK

    def test_heart_heals_on_entry(self):
        m = grid("S h G")
        state = step(initial_state(m), MOVE, m)
        assert state.health == 120
        assert state.hearts_collected == 1

    def test_gem_collected_on_entry(self):
        m = grid("S g G")
        state = step(initial_state(m), MOVE, m)
        assert state.gems_collected == 1


class TestExecute:
    def test_straight_corridor(self):
        m = grid("S . G")
        trace = execute(parse_program("move\nmove"), m)
        assert trace.outcome.success
        assert trace.primitive_actions == (MOVE, MOVE)

    def test_while_halts_on_goal_entry(self):
        m = grid("S . G")
        trace = execute(parse_program("while path_ahead { move }"), m)
        assert trace.outcome.success
        assert len(trace.primitive_actions) == 2

    def test_spin_forever_exhausts_fuel(self):
        m = grid("S . G")
        trace = execute(parse_program("while not at_goal { turn_left }"), m)
        assert not trace.outcome.success
        assert trace.outcome.reason is FailReason.FUEL_EXHAUSTED

    def test_termination_without_goal_is_incomplete(self):
        m = grid("S . G")
        trace = execute(parse_program("move"), m)
        assert trace.outcome.reason is FailReason.INCOMPLETE

    def test_goal_without_gems_is_pass_through(self):
        # route crosses the goal before the gem; success only on re-entry
        m = grid("S G g")
        trace = execute(parse_program("move\nmove\nturn_back\nmove"), m)
        assert trace.outcome.success
        assert len(trace.primitive_actions) == 4

    def test_repeat_counts(self):
        m = grid("S . . . . G")
        trace = execute(parse_program("repeat 5 { move }"), m)
        assert trace.outcome.success
        assert trace.primitive_actions == (MOVE,) * 5

    def test_ifelse_takes_one_branch(self):
        m = grid("S b . G")
        trace = execute(
            parse_program("if monster_ahead { attack } else { turn_left }\n"
                          "repeat 3 { move }"),
            m,
        )
        assert trace.outcome.success
        assert trace.primitive_actions[0] is Action.ATTACK

    def test_state_count_invariant(self):
        m = grid("S b . G")
        for src in ("move", "attack\nmove\nmove\nmove", "attack\nattack"):
            trace = execute(parse_program(src), m)
            assert len(trace.states) == len(trace.primitive_actions) + 1

    def test_determinism(self):
        rng = random.Random(3)
        for _ in range(25):
            m = random_maze(rng)
            p = random_program(rng)
            assert execute(p, m) == execute(p, m)

    def test_health_accounting(self):
        rng = random.Random(5)
        checked = 0
        for _ in range(200):
            m = random_maze(rng)
            p = random_program(rng)
            trace = execute(p, m, fuel=300)
            for s in trace.states:
                expected = (
                    m.initial_health
                    + m.heart_heal * bin(s.hearts_collected).count("1")
                    - sum(
                        m.damage(kind)
                        for i, (_, kind) in enumerate(m.monsters)
                        if s.monsters_defeated & (1 << i)
                    )
                )
                assert s.health == expected
                assert s.health > 0
                checked += 1
        assert checked > 500

    def test_run_actions_matches_execute(self):
        m = grid("S b . G")
        actions = (Action.ATTACK, MOVE, MOVE, MOVE)
        trace = run_actions(actions, m)
        assert trace.outcome.success
        assert final_health(trace) == 80
