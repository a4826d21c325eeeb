import json

import pytest
from click.testing import CliRunner

from mazekit import serialize_maze
from mazekit.cli import main
from helpers import grid

TRIVIAL = '{"width": 3, "height": 1, "start": {"x": 0, "y": 0, "dir": "E"}, "goal": {"x": 2, "y": 0}}'


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def trivial_maze(tmp_path):
    path = tmp_path / "trivial.maze"
    path.write_text(TRIVIAL)
    return str(path)


def test_validate_prints_canonical(runner, trivial_maze):
    result = runner.invoke(main, ["validate", trivial_maze])
    assert result.exit_code == 0
    assert '"width": 3' in result.output


def test_solve_low(runner, trivial_maze):
    result = runner.invoke(main, ["solve", trivial_maze, "--mode", "low"])
    assert result.exit_code == 0
    assert result.output == "move\nmove\n"


def test_solve_high_prints_program(runner, trivial_maze):
    result = runner.invoke(main, ["solve", trivial_maze, "--mode", "high"])
    assert result.exit_code == 0
    assert "move" in result.output


def test_solve_unsolvable_exit_1(runner, tmp_path):
    path = tmp_path / "blocked.maze"
    path.write_text(serialize_maze(grid("S # G")))
    result = runner.invoke(main, ["solve", str(path)])
    assert result.exit_code == 1


def test_solve_json_error_on_stderr(runner, tmp_path):
    path = tmp_path / "blocked.maze"
    path.write_text(serialize_maze(grid("S # G")))
    result = runner.invoke(main, ["solve", str(path), "--json"])
    assert result.exit_code == 1
    err = json.loads(result.stderr)
    assert err["code"] == "UNSOLVABLE"


def test_parse_error_exit_2(runner, tmp_path):
    path = tmp_path / "broken.maze"
    path.write_text("{nope")
    result = runner.invoke(main, ["solve", str(path)])
    assert result.exit_code == 2


def test_simulate_success(runner, trivial_maze, tmp_path):
    prog = tmp_path / "go.prog"
    prog.write_text("move\nmove\n")
    result = runner.invoke(main, ["simulate", trivial_maze, str(prog)])
    assert result.exit_code == 0
    assert "Success" in result.output


def test_simulate_spin_exits_1(runner, trivial_maze, tmp_path):
    prog = tmp_path / "spin.prog"
    prog.write_text("while not at_goal { turn_left }\n")
    result = runner.invoke(main, ["simulate", trivial_maze, str(prog)])
    assert result.exit_code == 1
    assert "FuelExhausted" in result.output


def test_check_small_maze_fails_size(runner, tmp_path):
    path = tmp_path / "small.maze"
    path.write_text(serialize_maze(grid("S . G\n. . .\n. g .")))
    result = runner.invoke(main, ["check", str(path)])
    assert result.exit_code == 1
    assert "FAIL" in result.output
    assert "size" in result.output


def test_check_json_output(runner, trivial_maze):
    result = runner.invoke(main, ["check", trivial_maze, "--json"])
    body = json.loads(result.output)
    assert {c["name"] for c in body["checks"]} >= {"size", "min_gems"}


def test_hint_stages(runner, trivial_maze):
    for stage, token in ((1, "steps"), (2, "previous hint"), (3, "```")):
        result = runner.invoke(main, ["hint", trivial_maze, "--stage", str(stage)])
        assert result.exit_code == 0
        assert token in result.output


def test_compress_shows_stages(runner, trivial_maze):
    result = runner.invoke(main, ["compress", trivial_maze])
    assert result.exit_code == 0
    assert "# tree" in result.output
    assert "# refined" in result.output
