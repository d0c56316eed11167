#!/usr/bin/env python3
"""Record the EM1 conformance fixture by driving the real HTTP service.

Writes frontend/fixtures/em1.json containing every request/response pair of
the scripted session, the final view, and the batch-trace events the same
choices produce through the game runner directly.
"""

import json
import sys
import threading
import urllib.request
from pathlib import Path

from btarski.formulas import print_formula
from btarski.library import default_registry, em1_formula, em1_realizer
from btarski.service import make_server
from btarski.strategy import run_game, ScriptedAbelard
from btarski.terms import print_term


def _post(base, path, payload):
    req = urllib.request.Request(
        base + path, data=json.dumps(payload).encode("utf-8"),
        headers={"Content-Type": "application/json"}, method="POST")
    with urllib.request.urlopen(req) as resp:
        return json.loads(resp.read().decode("utf-8"))


def _get(base, path):
    with urllib.request.urlopen(base + path) as resp:
        return json.loads(resp.read().decode("utf-8"))


def main():
    registry = default_registry()
    lt = registry.predicates["lt"]
    formula = print_formula(em1_formula(lt))
    realizer = print_term(em1_realizer(lt))

    server, _ = make_server(port=0)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    host, port = server.server_address[:2]
    base = "http://%s:%d" % (host, port)

    exchanges = []

    def post(path, payload):
        reply = _post(base, path, payload)
        exchanges.append({"method": "POST", "path": path,
                          "request": payload, "response": reply})
        return reply

    def get(path):
        reply = _get(base, path)
        exchanges.append({"method": "GET", "path": path,
                          "request": None, "response": reply})
        return reply

    create_body = {"v": 1, "op": "create", "formula": formula,
                   "realizer": realizer}
    created = post("/sessions", create_body)
    sid = created["id"]
    generic_sid = "SESSION"  # the client substitutes the real id

    post("/sessions/%s/move" % sid, {"v": 1, "op": "move", "choice": 2})
    post("/sessions/%s/move" % sid, {"v": 1, "op": "move", "choice": 1})
    final = get("/sessions/%s" % sid)
    trace = get("/sessions/%s/trace" % sid)
    server.shutdown()
    server.server_close()

    for ex in exchanges:
        ex["path"] = ex["path"].replace(sid, generic_sid)

    batch = run_game(em1_formula(lt), em1_realizer(lt), ScriptedAbelard([2, 1]))

    out = {
        "v": 1,
        "create_request": create_body,
        "choices": [2, 1],
        "exchanges": exchanges,
        "final_view": final["view"],
        "trace_export": trace,
        "batch_trace": batch.events,
    }
    target = Path(__file__).resolve().parent.parent / "fixtures" / "em1.json"
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(json.dumps(out, indent=2) + "\n", encoding="utf-8")
    print("wrote %s (%d exchanges)" % (target, len(exchanges)))
    return 0


if __name__ == "__main__":
    sys.exit(main())
