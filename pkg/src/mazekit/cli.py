"""Command-line front end.

Exit codes: 0 success, 1 domain failure (unsolvable maze, failed check,
failed run), 2 usage or parse error. --json switches to machine output;
under --json, errors go to stderr as ApiError-shaped JSON.
"""

from __future__ import annotations

import json
import sys

import click

from .chat import HttpChatClient
from .compressor import UnsolvableError, solve_high
from .errors import LimitError, MazeKitError, ParseError, SchemaError
from .interpreter import execute
from .maze import parse_maze, serialize_maze
from .program import parse_program, print_program
from .scaffold import (
    DesignRequirements,
    check_design,
    new_session,
    request_hint,
)
from .server import trace_json
from .solver import solve_low


def _fail(code, message, exit_code, as_json):
    if as_json:
        click.echo(json.dumps({"code": code, "message": message}), err=True)
    else:
        click.echo(f"error: {message}", err=True)
    sys.exit(exit_code)


def _load_maze(path, as_json):
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_maze(fh.read())
    except OSError as exc:
        _fail("SYNTAX", str(exc), 2, as_json)
    except ParseError as exc:
        _fail("SYNTAX", str(exc), 2, as_json)
    except SchemaError as exc:
        _fail("SCHEMA", str(exc), 2, as_json)


@click.group()
def main():
    """Maze engine: validate, solve, compress, simulate, check, hint, serve."""


@main.command()
@click.argument("maze_file", type=click.Path())
@click.option("--json", "as_json", is_flag=True)
def validate(maze_file, as_json):
    """Parse and validate a maze document, printing its canonical form."""
    m = _load_maze(maze_file, as_json)
    click.echo(serialize_maze(m), nl=False)


@main.command()
@click.argument("maze_file", type=click.Path())
@click.option("--mode", type=click.Choice(["low", "high"]), default="low")
@click.option("--json", "as_json", is_flag=True)
def solve(maze_file, mode, as_json):
    """Print the low-efficiency action list or the high-efficiency program."""
    m = _load_maze(maze_file, as_json)
    if mode == "low":
        result = solve_low(m)
        if not result.solvable:
            _fail("UNSOLVABLE", f"maze is unsolvable: {result.reason.value}", 1, as_json)
        if as_json:
            click.echo(json.dumps({"actions": [a.value for a in result.actions]}))
        else:
            for action in result.actions:
                click.echo(action.value)
        return
    try:
        result = solve_high(m)
    except UnsolvableError as exc:
        _fail("UNSOLVABLE", str(exc), 1, as_json)
    if as_json:
        click.echo(json.dumps({
            "program": print_program(result.program),
            "block_count": result.block_count,
            "exec_steps": result.exec_steps,
        }))
    else:
        click.echo(print_program(result.program), nl=False)


@main.command()
@click.argument("maze_file", type=click.Path())
@click.option("--json", "as_json", is_flag=True)
def compress(maze_file, as_json):
    """Full compression pipeline with per-stage snapshots."""
    m = _load_maze(maze_file, as_json)
    try:
        result = solve_high(m)
    except UnsolvableError as exc:
        _fail("UNSOLVABLE", str(exc), 1, as_json)
    stages = {name: print_program(p) for name, p in result.stages.items()}
    if as_json:
        click.echo(json.dumps({
            "stages": stages,
            "block_count": result.block_count,
            "exec_steps": result.exec_steps,
            "trace_equivalent": result.trace_equivalent,
        }))
    else:
        for name in ("tree", "compressed", "refined"):
            click.echo(f"# {name}")
            click.echo(stages[name], nl=False)
        click.echo(f"# blocks={result.block_count} steps={result.exec_steps}")


@main.command()
@click.argument("maze_file", type=click.Path())
@click.argument("program_file", type=click.Path())
@click.option("--fuel", type=int, default=10_000)
@click.option("--json", "as_json", is_flag=True)
def simulate(maze_file, program_file, fuel, as_json):
    """Run a program against a maze and report the outcome."""
    m = _load_maze(maze_file, as_json)
    try:
        with open(program_file, encoding="utf-8") as fh:
            program = parse_program(fh.read())
    except OSError as exc:
        _fail("SYNTAX", str(exc), 2, as_json)
    except ParseError as exc:
        _fail("SYNTAX", str(exc), 2, as_json)
    except LimitError as exc:
        _fail("LIMIT", str(exc), 2, as_json)
    trace = execute(program, m, fuel)
    if as_json:
        click.echo(json.dumps(trace_json(trace)))
    else:
        click.echo(f"outcome: {trace.outcome}")
        click.echo(f"steps: {len(trace.primitive_actions)}")
        click.echo(f"final health: {trace.states[-1].health}")
    sys.exit(0 if trace.outcome.success else 1)


@main.command()
@click.argument("maze_file", type=click.Path())
@click.option("--width", type=int, default=8)
@click.option("--height", type=int, default=8)
@click.option("--min-gems", type=int, default=1)
@click.option("--min-monsters", type=int, default=2)
@click.option("--min-asset-kinds", type=int, default=3)
@click.option("--json", "as_json", is_flag=True)
def check(maze_file, width, height, min_gems, min_monsters, min_asset_kinds, as_json):
    """Check a maze against the lesson design requirements."""
    m = _load_maze(maze_file, as_json)
    req = DesignRequirements(
        required_width=width,
        required_height=height,
        min_gems=min_gems,
        min_monsters=min_monsters,
        min_asset_kinds=min_asset_kinds,
    )
    report = check_design(m, req)
    if as_json:
        click.echo(json.dumps({
            "passed": report.passed,
            "checks": [
                {"name": c.name, "passed": c.passed, "detail": c.detail}
                for c in report.checks
            ],
        }))
    else:
        for c in report.checks:
            mark = "PASS" if c.passed else "FAIL"
            click.echo(f"[{mark}] {c.name}: {c.detail}")
    sys.exit(0 if report.passed else 1)


@main.command()
@click.argument("maze_file", type=click.Path())
@click.option("--stage", type=click.IntRange(1, 3), default=1,
              help="staged-disclosure stage to print")
@click.option("--json", "as_json", is_flag=True)
def hint(maze_file, stage, as_json):
    """Print the hint a session would receive at the given stage."""
    m = _load_maze(maze_file, as_json)
    session = new_session(m)
    payload = None
    try:
        for _ in range(stage):
            session, payload = request_hint(session, m)
    except UnsolvableError as exc:
        _fail("UNSOLVABLE", str(exc), 1, as_json)
    if as_json:
        click.echo(json.dumps({
            "stage": payload.stage,
            "kind": payload.kind.value,
            "content": payload.content,
            "rendered_text": payload.rendered_text,
        }))
    else:
        click.echo(payload.rendered_text)


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8000)
@click.option("--store", "store_path", type=click.Path(), default=None,
              help="session snapshot file (persistence off when omitted)")
@click.option("--chat-url", default=None, help="chat-completions base URL")
@click.option("--chat-model", default=None)
@click.option("--chat-key-env", default="MAZEKIT_CHAT_KEY",
              help="environment variable holding the API key")
@click.option("--timeout", type=float, default=10.0, help="engine time box, seconds")
def serve(host, port, store_path, chat_url, chat_model, chat_key_env, timeout):
    """Run the HTTP gateway."""
    from .server import serve as run_server

    client = None
    if chat_url and chat_model:
        client = HttpChatClient(chat_url, chat_model, chat_key_env)
    run_server(host=host, port=port, store_path=store_path,
               chat_client=client, solver_timeout=timeout)


if __name__ == "__main__":
    main()
