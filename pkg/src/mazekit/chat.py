"""Optional chat-completion layer with locally executed tool calls.

The language model (when configured) can request maze facts and solver
results, but every tool result is computed by the engine, and the final
program is withheld until the hint session has already reached stage 2.
Without a configured model the gateway falls back to deterministic hints.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field

from .maze import Maze, serialize_maze
from .program import print_program
from .scaffold import MAX_SENTENCES, check_design
from .compressor import UnsolvableError, solve_high
from .solver import solve_low

TOOL_NAMES = ("get_maze_state", "solve_low", "solve_high", "design_check")

WITHHELD_NOTICE = (
    "withheld: the high-efficiency solution unlocks on the third hint request"
)


@dataclass(frozen=True)
class ToolCall:
    name: str
    arguments: dict = field(default_factory=dict)
    result: object = None


@dataclass(frozen=True)
class ChatTurn:
    role: str  # student | assistant | tool
    text: str
    tool_call: ToolCall | None = None


@dataclass(frozen=True)
class ChatResponse:
    text: str | None = None
    tool_calls: tuple = ()


class ChatUnavailable(Exception):
    pass


def truncate_sentences(text: str, limit: int = MAX_SENTENCES) -> str:
    """Keep at most `limit` sentences (period/question/bang terminated)."""
    parts = re.split(r"(?<=[.!?])\s+", text.strip())
    if len(parts) <= limit:
        return text.strip()
    return " ".join(parts[:limit])


def run_tool(name: str, m: Maze, session_stage: int):
    """Execute a tool locally; results never come from the model."""
    if name == "get_maze_state":
        return serialize_maze(m)
    if name == "solve_low":
        result = solve_low(m)
        if not result.solvable:
            return {"unsolvable": result.reason.value}
        return {"actions": [a.value for a in result.actions]}
    if name == "solve_high":
        if session_stage < 2:
            return {"withheld": WITHHELD_NOTICE}
        try:
            high = solve_high(m)
        except UnsolvableError as exc:
            return {"unsolvable": exc.reason.value}
        return {"program": print_program(high.program)}
    if name == "design_check":
        report = check_design(m)
        return {
            "passed": report.passed,
            "checks": [
                {"name": c.name, "passed": c.passed, "detail": c.detail}
                for c in report.checks
            ],
        }
    raise KeyError(f"unknown tool {name!r}")


class ScriptedChatClient:
    """Deterministic stand-in model for tests: replays canned responses."""

    def __init__(self, responses):
        self.responses = list(responses)
        self.requests = []

    def complete(self, messages):
        self.requests.append(messages)
        if not self.responses:
            return ChatResponse(text="I have nothing further to add.")
        return self.responses.pop(0)


class HttpChatClient:
    """OpenAI-style chat-completions client; key read from an env variable."""

    def __init__(self, base_url: str, model: str, key_env: str = "MAZEKIT_CHAT_KEY"):
        self.base_url = base_url.rstrip("/")
        self.model = model
        self.key_env = key_env

    def complete(self, messages):
        import httpx

        headers = {}
        key = os.environ.get(self.key_env)
        if key:
            headers["Authorization"] = f"Bearer {key}"
        try:
            response = httpx.post(
                f"{self.base_url}/chat/completions",
                json={"model": self.model, "messages": messages},
                headers=headers,
                timeout=30.0,
            )
            response.raise_for_status()
        except Exception as exc:
            raise ChatUnavailable(str(exc)) from exc
        message = response.json()["choices"][0]["message"]
        calls = []
        for call in message.get("tool_calls", []) or []:
            fn = call.get("function", {})
            try:
                arguments = json.loads(fn.get("arguments") or "{}")
            except json.JSONDecodeError:
                arguments = {}
            calls.append(ToolCall(name=fn.get("name", ""), arguments=arguments))
        return ChatResponse(text=message.get("content"), tool_calls=tuple(calls))


def chat(client, m: Maze, session_stage: int, history, student_text: str,
         max_tool_rounds: int = 5):
    """One assistant turn. Returns (assistant ChatTurn, tool ChatTurns)."""
    if client is None:
        raise ChatUnavailable("no chat endpoint configured")
    messages = [
        {
            "role": "system",
            "content": (
                "You are a maze-programming tutor. Guide with questions, never "
                f"reveal final programs early. Current hint stage: {session_stage}. "
                f"Available tools: {', '.join(TOOL_NAMES)}. "
                "Maze state:\n" + serialize_maze(m)
            ),
        },
    ]
    for turn in history:
        role = "user" if turn["role"] == "student" else "assistant"
        messages.append({"role": role, "content": turn["text"]})
    messages.append({"role": "user", "content": student_text})

    tool_turns = []
    for _ in range(max_tool_rounds):
        response = client.complete(messages)
        if not response.tool_calls:
            text = truncate_sentences(response.text or "")
            return ChatTurn(role="assistant", text=text), tool_turns
        for call in response.tool_calls:
            if call.name not in TOOL_NAMES:
                result = {"error": f"unknown tool {call.name}"}
            else:
                result = run_tool(call.name, m, session_stage)
            tool_turns.append(ChatTurn(
                role="tool",
                text=json.dumps(result) if not isinstance(result, str) else result,
                tool_call=ToolCall(call.name, call.arguments, result),
            ))
            messages.append({
                "role": "tool",
                "name": call.name,
                "content": tool_turns[-1].text,
            })
    # model kept asking for tools; close the turn with whatever it last said
    return ChatTurn(role="assistant", text=truncate_sentences(response.text or "")), tool_turns
