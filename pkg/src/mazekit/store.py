"""Write-through JSON persistence for mazes, hint sessions and chat logs.

One snapshot file, rewritten atomically on every mutation; restart restores
the full state. Scale target is a single classroom, so a database would be
overkill.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass, field

from .maze import Maze, parse_maze, serialize_maze
from .scaffold import HintKind, HintPayload, HintSession


def _payload_to_json(p: HintPayload):
    return {
        "stage": p.stage,
        "kind": p.kind.value,
        "content": p.content,
        "rendered_text": p.rendered_text,
    }


def _payload_from_json(raw) -> HintPayload:
    return HintPayload(
        stage=raw["stage"],
        kind=HintKind(raw["kind"]),
        content=raw["content"],
        rendered_text=raw["rendered_text"],
    )


def _session_to_json(s: HintSession):
    return {
        "session_id": s.session_id,
        "maze_snapshot": s.maze_snapshot,
        "stage": s.stage,
        "payloads": [_payload_to_json(p) for p in s.payloads],
        "created": s.created,
        "updated": s.updated,
    }


def _session_from_json(raw) -> HintSession:
    return HintSession(
        session_id=raw["session_id"],
        maze_snapshot=raw["maze_snapshot"],
        stage=raw["stage"],
        payloads=tuple(_payload_from_json(p) for p in raw["payloads"]),
        created=raw["created"],
        updated=raw["updated"],
    )


@dataclass
class SessionRecord:
    session: HintSession
    maze_id: str
    chat_log: list = field(default_factory=list)  # list of ChatTurn dicts


class SessionStore:
    """In-memory maps backed by a snapshot file; thread-safe."""

    def __init__(self, path: str | None = None):
        self.path = path
        self._lock = threading.Lock()
        self._session_locks: dict[str, threading.Lock] = {}
        self.mazes: dict[str, Maze] = {}
        self.sessions: dict[str, SessionRecord] = {}
        if path and os.path.exists(path):
            self._load()

    def _load(self):
        with open(self.path, encoding="utf-8") as fh:
            raw = json.load(fh)
        self.mazes = {
            maze_id: parse_maze(doc) for maze_id, doc in raw.get("mazes", {}).items()
        }
        for item in raw.get("sessions", []):
            record = SessionRecord(
                session=_session_from_json(item["session"]),
                maze_id=item["maze_id"],
                chat_log=item.get("chat_log", []),
            )
            self.sessions[record.session.session_id] = record

    def _flush(self):
        if not self.path:
            return
        raw = {
            "mazes": {mid: serialize_maze(m) for mid, m in self.mazes.items()},
            "sessions": [
                {
                    "session": _session_to_json(rec.session),
                    "maze_id": rec.maze_id,
                    "chat_log": rec.chat_log,
                }
                for rec in self.sessions.values()
            ],
        }
        tmp = self.path + ".tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump(raw, fh, indent=2)
        os.replace(tmp, self.path)

    # -- mazes ------------------------------------------------------------

    def put_maze(self, maze_id: str, m: Maze):
        with self._lock:
            self.mazes[maze_id] = m
            self._flush()

    def get_maze(self, maze_id: str) -> Maze | None:
        with self._lock:
            return self.mazes.get(maze_id)

    # -- sessions ---------------------------------------------------------

    def session_lock(self, session_id: str) -> threading.Lock:
        with self._lock:
            return self._session_locks.setdefault(session_id, threading.Lock())

    def put_session(self, record: SessionRecord):
        with self._lock:
            self.sessions[record.session.session_id] = record
            self._flush()

    def get_session(self, session_id: str) -> SessionRecord | None:
        with self._lock:
            return self.sessions.get(session_id)
