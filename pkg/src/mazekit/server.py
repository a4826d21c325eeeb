"""HTTP/JSON gateway over the engine.

Every non-2xx body is an ApiError object: {status, code, message, detail}.
Solver and compressor calls are time-boxed; per-session requests are
serialized; all state lives in the SessionStore snapshot.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor, TimeoutError as FutureTimeout
from dataclasses import replace

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, Response

from .chat import ChatTurn, ChatUnavailable, chat, truncate_sentences
from .compressor import UnsolvableError, solve_high
from .errors import LimitError, ParseError, SchemaError, StaleSessionError
from .interpreter import execute
from .maze import parse_maze, serialize_maze
from .program import parse_program, print_program
from .scaffold import (
    DesignRequirements,
    check_design,
    new_session,
    request_hint,
)
from .solver import solve_low
from .store import SessionRecord, SessionStore

DEFAULT_TIMEOUT = 10.0


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, detail=None):
        self.status = status
        self.code = code
        self.message = message
        self.detail = detail
        super().__init__(message)

    def response(self):
        return JSONResponse(
            status_code=self.status,
            content={
                "status": self.status,
                "code": self.code,
                "message": self.message,
                "detail": self.detail,
            },
        )


def _state_json(s):
    return {
        "x": s.position[0],
        "y": s.position[1],
        "dir": s.orientation.value,
        "health": s.health,
        "gems_collected": s.gems_collected,
        "hearts_collected": s.hearts_collected,
        "monsters_defeated": s.monsters_defeated,
        "steps_taken": s.steps_taken,
    }


def trace_json(trace):
    return {
        "outcome": {
            "success": trace.outcome.success,
            "reason": trace.outcome.reason.value if trace.outcome.reason else None,
        },
        "actions": [a.value for a in trace.primitive_actions],
        "states": [_state_json(s) for s in trace.states],
        "fuel_used": trace.fuel_used,
    }


def create_app(store: SessionStore | None = None, chat_client=None,
               solver_timeout: float = DEFAULT_TIMEOUT) -> FastAPI:
    app = FastAPI(title="mazekit")
    app.state.store = store or SessionStore()
    app.state.chat_client = chat_client
    app.state.executor = ThreadPoolExecutor(max_workers=4)
    store = app.state.store

    @app.exception_handler(ApiError)
    async def _api_error(request: Request, exc: ApiError):
        return exc.response()

    def timeboxed(fn, *args):
        future = app.state.executor.submit(fn, *args)
        try:
            return future.result(timeout=solver_timeout)
        except FutureTimeout:
            raise ApiError(504, "LIMIT", "engine call exceeded the time box") from None

    def need_maze(maze_id: str):
        m = store.get_maze(maze_id)
        if m is None:
            raise ApiError(404, "NOT_FOUND", f"no maze {maze_id!r}")
        return m

    def need_session(session_id: str):
        record = store.get_session(session_id)
        if record is None:
            raise ApiError(404, "NOT_FOUND", f"no session {session_id!r}")
        return record

    def parse_document(raw_body: bytes):
        try:
            return parse_maze(raw_body.decode("utf-8"))
        except ParseError as exc:
            raise ApiError(400, "SYNTAX", str(exc)) from exc
        except SchemaError as exc:
            raise ApiError(422, "SCHEMA", str(exc)) from exc

    # -- mazes ------------------------------------------------------------

    @app.put("/mazes/{maze_id}")
    async def put_maze(maze_id: str, request: Request):
        m = parse_document(await request.body())
        store.put_maze(maze_id, m)
        return Response(content=serialize_maze(m), media_type="application/json")

    @app.get("/mazes/{maze_id}")
    async def get_maze(maze_id: str):
        m = need_maze(maze_id)
        return Response(content=serialize_maze(m), media_type="application/json")

    @app.post("/mazes/{maze_id}/validate")
    async def validate_maze(maze_id: str, request: Request):
        body = await request.body()
        if body.strip():
            parse_document(body)
        else:
            need_maze(maze_id)
        return {"valid": True}

    @app.post("/mazes/{maze_id}/design-check")
    async def design_check(maze_id: str, request: Request):
        m = need_maze(maze_id)
        body = await request.body()
        req = DesignRequirements(**json.loads(body)) if body.strip() else None
        report = timeboxed(check_design, m, req)
        return {
            "passed": report.passed,
            "checks": [
                {"name": c.name, "passed": c.passed, "detail": c.detail}
                for c in report.checks
            ],
            "witness_path_length": report.witness_path_length,
            "witness_health_margin": report.witness_health_margin,
        }

    @app.post("/mazes/{maze_id}/solve")
    async def solve(maze_id: str, mode: str = "low"):
        m = need_maze(maze_id)
        if mode == "low":
            result = timeboxed(solve_low, m)
            if not result.solvable:
                raise ApiError(422, "UNSOLVABLE", "maze has no valid solution",
                               detail={"reason": result.reason.value})
            return {
                "mode": "low",
                "actions": [a.value for a in result.actions],
                "explored": result.explored,
            }
        if mode == "high":
            try:
                result = timeboxed(solve_high, m)
            except UnsolvableError as exc:
                raise ApiError(422, "UNSOLVABLE", "maze has no valid solution",
                               detail={"reason": exc.reason.value}) from exc
            return {
                "mode": "high",
                "program": print_program(result.program),
                "block_count": result.block_count,
                "exec_steps": result.exec_steps,
                "trace_equivalent": result.trace_equivalent,
            }
        raise ApiError(400, "SYNTAX", f"mode must be low or high, got {mode!r}")

    @app.post("/mazes/{maze_id}/execute")
    async def execute_program(maze_id: str, request: Request):
        m = need_maze(maze_id)
        body = await request.body()
        try:
            payload = json.loads(body)
            text = payload["program"] if isinstance(payload, dict) else str(payload)
        except (json.JSONDecodeError, KeyError):
            text = body.decode("utf-8")
        try:
            program = parse_program(text)
        except ParseError as exc:
            raise ApiError(400, "SYNTAX", str(exc)) from exc
        except LimitError as exc:
            raise ApiError(422, "LIMIT", str(exc)) from exc
        trace = timeboxed(execute, program, m)
        return trace_json(trace)

    # -- sessions ---------------------------------------------------------

    @app.post("/sessions")
    async def create_session(request: Request):
        payload = json.loads(await request.body())
        maze_id = payload.get("maze_id")
        m = need_maze(maze_id)
        session = new_session(m)
        store.put_session(SessionRecord(session=session, maze_id=maze_id))
        return {
            "session_id": session.session_id,
            "maze_id": maze_id,
            "stage": session.stage,
        }

    @app.post("/sessions/{session_id}/hint")
    async def hint(session_id: str):
        record = need_session(session_id)
        with store.session_lock(session_id):
            m = need_maze(record.maze_id)
            try:
                session, payload = timeboxed(request_hint, record.session, m)
            except StaleSessionError as exc:
                raise ApiError(409, "STALE_SESSION", str(exc)) from exc
            except UnsolvableError as exc:
                raise ApiError(422, "UNSOLVABLE", "maze has no valid solution",
                               detail={"reason": exc.reason.value}) from exc
            store.put_session(replace(record, session=session))
        return {
            "stage": payload.stage,
            "kind": payload.kind.value,
            "content": payload.content,
            "rendered_text": payload.rendered_text,
        }

    @app.post("/sessions/{session_id}/chat")
    async def chat_endpoint(session_id: str, request: Request):
        record = need_session(session_id)
        payload = json.loads(await request.body())
        student_text = payload.get("text", "")
        with store.session_lock(session_id):
            m = need_maze(record.maze_id)
            record.chat_log.append({"role": "student", "text": student_text})
            fallback = False
            try:
                turn, tool_turns = chat(
                    app.state.chat_client, m, record.session.stage,
                    record.chat_log[:-1], student_text,
                )
            except ChatUnavailable:
                # degraded mode: deterministic staged hint instead of chat
                fallback = True
                tool_turns = []
                try:
                    session, hint_payload = timeboxed(request_hint, record.session, m)
                except StaleSessionError as exc:
                    raise ApiError(409, "STALE_SESSION", str(exc)) from exc
                except UnsolvableError as exc:
                    raise ApiError(422, "UNSOLVABLE", "maze has no valid solution",
                                   detail={"reason": exc.reason.value}) from exc
                record.session = session
                turn = ChatTurn(
                    role="assistant",
                    text=truncate_sentences(
                        "No tutor model is configured, so here is your next hint.\n"
                        + hint_payload.rendered_text
                    ),
                )
            record.chat_log.append({"role": "assistant", "text": turn.text})
            store.put_session(record)
        return {
            "role": turn.role,
            "text": turn.text,
            "fallback": fallback,
            "tool_calls": [
                {
                    "name": t.tool_call.name,
                    "result": t.tool_call.result,
                }
                for t in tool_turns
            ],
        }

    return app


def serve(host="127.0.0.1", port=8000, store_path=None, chat_client=None,
          solver_timeout: float = DEFAULT_TIMEOUT):
    import uvicorn

    app = create_app(SessionStore(store_path), chat_client, solver_timeout)
    uvicorn.run(app, host=host, port=port)
