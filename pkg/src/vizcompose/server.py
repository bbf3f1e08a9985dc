"""Session server: one websocket connection drives one engine session
over a JSON message protocol (`protocolVersion` 1, endpoint `/session`).

Every applied event is answered with a full state snapshot, the ranked
candidate list when non-empty, and a committed message per command, so
a thin client can render previews without computing any intent itself.
The protocol core is a plain class; the websocket layer only shuttles
frames.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from .intent import InvalidEvent, SessionState, candidates, step
from .io import (
    ValidationError,
    canonical_json,
    composite_to_json,
    load_manifest,
    parse_event,
    view_to_json,
)

PROTOCOL_VERSION = 1

_session_ids = itertools.count(1)


@dataclass
class SessionActor:
    """Protocol state machine for one connection: hello, then load, then
    events, strictly in order."""

    session_id: str = field(default_factory=lambda: f"s{next(_session_ids)}")
    greeted: bool = False
    state: SessionState | None = None

    def handle(self, msg: dict) -> list[dict]:
        kind = msg.get("kind")
        if kind == "hello":
            return self._hello(msg)
        if not self.greeted:
            return [_error("out-of-order", "hello must come first")]
        if kind == "load":
            return self._load(msg)
        if kind == "event":
            return self._event(msg)
        return [_error("bad-event", f"unknown message kind {kind!r}")]

    def _hello(self, msg: dict) -> list[dict]:
        version = msg.get("protocolVersion")
        if version != PROTOCOL_VERSION:
            return [
                _error(
                    "bad-event",
                    f"unsupported protocolVersion {version!r}; this server "
                    f"speaks {PROTOCOL_VERSION}",
                )
            ]
        self.greeted = True
        return [{"kind": "welcome", "sessionId": self.session_id}]

    def _load(self, msg: dict) -> list[dict]:
        if "manifest" not in msg:
            return [_error("bad-event", "load needs a manifest")]
        try:
            manifest = load_manifest(json.dumps(msg["manifest"]))
        except Exception as err:
            return [_error("bad-event", f"manifest rejected: {err}")]
        self.state = manifest.session()
        return [self._state_message()]

    def _event(self, msg: dict) -> list[dict]:
        if self.state is None:
            return [_error("no-manifest", "load a manifest before sending events")]
        if "event" not in msg:
            return [_error("bad-event", "event message needs an event")]
        try:
            event = parse_event(msg["event"])
        except ValidationError as err:
            return [_error("bad-event", str(err))]
        except Exception as err:
            return [_error("bad-event", f"unparseable event: {err}")]
        before = len(self.state.commands)
        try:
            self.state = step(self.state, event)
        except InvalidEvent as err:
            return [_error("bad-event", str(err))]
        out = [self._state_message()]
        ranked = candidates(self.state)
        if ranked:
            out.append(
                {
                    "kind": "candidates",
                    "candidates": [
                        {
                            "type": c.type.value,
                            "constituents": list(c.constituents),
                            "rank": c.rank,
                            "admissible": c.admissible,
                            "context": c.context,
                        }
                        for c in ranked
                    ],
                }
            )
        for command in self.state.commands[before:]:
            if command.kind == "compose":
                out.append(
                    {"kind": "committed", "composite": composite_to_json(command.spec)}
                )
            else:
                out.append(
                    {
                        "kind": "committed",
                        "decomposed": command.composite_id,
                        "trigger": command.trigger.value,
                    }
                )
        return out

    def _state_message(self) -> dict:
        state = self.state
        pairs = []
        for (a, b), pr in sorted(state.relations.pairs.items()):
            pairs.append(
                {
                    "a": a,
                    "b": b,
                    "gap": pr.gap,
                    "orientationAngle": pr.orientation,
                    "colliding": pr.colliding,
                    "latched": (a, b) in state.latched,
                }
            )
        return {
            "kind": "state",
            "views": [view_to_json(v) for v in state.views.values()],
            "composites": [
                composite_to_json(c) for c in state.composites.values()
            ],
            "relations": {"pairs": pairs},
        }


def _error(code: str, message: str) -> dict:
    return {"kind": "error", "code": code, "message": message}


def build_app(static_dir: str | Path | None = None):
    """FastAPI app exposing /session; optionally serves the playground."""
    app = FastAPI(title="vizcompose session server")

    @app.websocket("/session")
    async def session(socket: "WebSocket"):
        await socket.accept()
        actor = SessionActor()
        try:
            while True:
                text = await socket.receive_text()
                try:
                    msg = json.loads(text)
                except json.JSONDecodeError as err:
                    await socket.send_text(
                        canonical_json(_error("bad-event", f"not JSON: {err.msg}"))
                    )
                    continue
                for out in actor.handle(msg):
                    await socket.send_text(canonical_json(out))
        except WebSocketDisconnect:
            pass

    static = Path(static_dir) if static_dir else _default_static_dir()
    if static is not None and static.is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static, html=True), name="playground")
    return app


def _default_static_dir() -> Path | None:
    # repo layout: frontend/ beside src/; present when the playground is built
    here = Path(__file__).resolve()
    for parent in here.parents:
        candidate = parent / "frontend"
        if (candidate / "index.html").is_file():
            return candidate
    return None
