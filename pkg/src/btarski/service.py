"""HTTP session service: create games, play the refuter, fetch traces.

Endpoints (all bodies JSON, versioned with "v": 1):

    POST /sessions              {formula, realizer, fuel?, display_range?,
                                 monitor_bound?, prelude?}   -> {id, view}
    POST /sessions/{id}/move    {choice}                     -> {view, events}
    GET  /sessions/{id}                                      -> {view}
    GET  /sessions/{id}/trace                                -> {config, events}

Domain errors come back as {"v": 1, "error": code, "message": ...} with
status 400 (404 for unknown sessions).  The bind address is taken from the
BTARSKI_BIND environment variable unless given explicitly.  A directory of
static files (the browser client) can be mounted at the root.
"""

from __future__ import annotations

import json
import os
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from .errors import EngineError, SessionFinished
from .library import default_registry
from .session import Session, SessionConfig
from .sexpr import Registry

__all__ = ["SessionStore", "make_server", "serve_forever"]

_STATIC_TYPES = {".html": "text/html; charset=utf-8",
                 ".js": "text/javascript; charset=utf-8",
                 ".css": "text/css; charset=utf-8",
                 ".map": "application/json",
                 ".json": "application/json"}


class SessionStore:
    """Thread-safe session registry; operations on one session serialize."""

    def __init__(self, registry: Registry | None = None):
        self.registry = registry if registry is not None else default_registry()
        self._sessions = {}
        self._locks = {}
        self._lock = threading.Lock()

    def create(self, config: SessionConfig) -> Session:
        session = Session(config, self.registry)
        with self._lock:
            self._sessions[session.id] = session
            self._locks[session.id] = threading.Lock()
        return session

    def get(self, session_id: str) -> Session:
        with self._lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise KeyError(session_id)
        return session

    def lock_for(self, session_id: str) -> threading.Lock:
        with self._lock:
            return self._locks[session_id]


def _handler_class(store: SessionStore, ui_dir: Path | None):

    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, fmt, *args):  # keep test output clean
            pass

        def _send_json(self, payload, status=200):
            body = json.dumps(payload).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def _send_error(self, code, message, status=400):
            self._send_json({"v": 1, "error": code, "message": message}, status)

        def _read_body(self):
            length = int(self.headers.get("Content-Length") or 0)
            raw = self.rfile.read(length) if length else b"{}"
            try:
                return json.loads(raw.decode("utf-8"))
            except ValueError:
                return None

        def _serve_static(self, path):
            if ui_dir is None:
                self._send_error("E_NOT_FOUND", "no UI mounted", 404)
                return
            rel = "index.html" if path in ("", "/") else path.lstrip("/")
            target = (ui_dir / rel).resolve()
            if not str(target).startswith(str(ui_dir.resolve())) \
                    or not target.is_file():
                self._send_error("E_NOT_FOUND", "no such file", 404)
                return
            body = target.read_bytes()
            self.send_response(200)
            self.send_header("Content-Type", _STATIC_TYPES.get(
                target.suffix, "application/octet-stream"))
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def do_GET(self):
            parts = [p for p in self.path.split("?")[0].split("/") if p]
            if len(parts) == 2 and parts[0] == "sessions":
                return self._with_session(parts[1], lambda s: self._send_json(
                    {"v": 1, "view": s.view()}))
            if len(parts) == 3 and parts[0] == "sessions" and parts[2] == "trace":
                return self._with_session(parts[1], lambda s: self._send_json(
                    s.export_trace()))
            return self._serve_static(self.path)

        def do_POST(self):
            parts = [p for p in self.path.split("?")[0].split("/") if p]
            body = self._read_body()
            if body is None:
                return self._send_error("E_PARSE", "request body is not JSON")
            if parts == ["sessions"]:
                return self._create(body)
            if len(parts) == 3 and parts[0] == "sessions" and parts[2] == "move":
                return self._move(parts[1], body)
            return self._send_error("E_NOT_FOUND", "no such endpoint", 404)

        def _create(self, body):
            op = body.get("op", "create")
            if op != "create":
                return self._send_error("E_PARSE", "expected op create")
            try:
                config = SessionConfig(
                    formula=body["formula"], realizer=body["realizer"],
                    fuel=body.get("fuel", SessionConfig.fuel),
                    display_range=body.get("display_range", 100),
                    monitor_bound=body.get("monitor_bound"),
                    prelude=body.get("prelude"))
            except KeyError as missing:
                return self._send_error("E_PARSE",
                                        "missing field %s" % missing)
            try:
                session = store.create(config)
            except EngineError as err:
                return self._send_error(err.code, err.message)
            self._send_json({"v": 1, "id": session.id, "view": session.view()})

        def _move(self, session_id, body):
            op = body.get("op", "move")
            if op != "move":
                return self._send_error("E_PARSE", "expected op move")
            if "choice" not in body:
                return self._send_error("E_PARSE", "missing field 'choice'")

            def apply(session):
                with store.lock_for(session.id):
                    try:
                        events = session.move(body["choice"])
                    except SessionFinished as err:
                        return self._send_error(err.code, err.message)
                    except EngineError as err:
                        return self._send_error(err.code, err.message)
                    self._send_json({"v": 1, "view": session.view(),
                                     "events": events})

            return self._with_session(session_id, apply)

        def _with_session(self, session_id, fn):
            try:
                session = store.get(session_id)
            except KeyError:
                return self._send_error("E_NOT_FOUND",
                                        "no session %r" % session_id, 404)
            return fn(session)

    return Handler


def make_server(port: int = 0, bind: str | None = None,
                registry: Registry | None = None,
                ui_dir: str | None = None):
    """Build (but do not start) the threading HTTP server and its store."""
    store = SessionStore(registry)
    host = bind if bind is not None else os.environ.get("BTARSKI_BIND",
                                                        "127.0.0.1")
    handler = _handler_class(store, Path(ui_dir) if ui_dir else None)
    server = ThreadingHTTPServer((host, port), handler)
    return server, store


def serve_forever(port: int, bind: str | None = None,
                  registry: Registry | None = None, ui_dir: str | None = None):
    server, _ = make_server(port, bind, registry, ui_dir)
    host, actual_port = server.server_address[:2]
    print("serving on http://%s:%d" % (host, actual_port), flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()
