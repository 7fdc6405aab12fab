"""HTTP adapter exposing the oracle contract for live labeling.

The run loop blocks inside HttpOracle.label() until a label is posted.
Exactly one query is pending at a time, mirroring the loop's synchronous
semantics. Endpoints (JSON bodies, schema version 1):

    GET  /api/query                 pending query, or 204 when idle
    POST /api/query/<id>/label      {"label": "<name>"}; new names register
    GET  /api/status                slot progress, registry, live metrics
    GET  /api/report                final report when the run has finished

A restart of the HTTP server around a still-unanswered oracle re-exposes
the same pending query: the query state lives in the oracle, not in the
server.
"""

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import numpy as np

from .evaluation import accuracy, annotation_effort
from .loop import Oracle, OracleError, run

API_VERSION = 1
MAX_SUMMARY_POINTS = 64


class HttpOracle(Oracle):
    """Blocks the run loop on a pending query until an answer is posted."""

    def __init__(self, timeout: float = None):
        self._lock = threading.Lock()
        self._answered = threading.Event()
        self._pending = None
        self._answer = None
        self._counter = 0
        self.timeout = timeout

    def label(self, batch, context):
        with self._lock:
            self._counter += 1
            self._pending = {
                "id": self._counter,
                "slot": int(batch.slot_index),
                "stream": batch.stream_id,
                "points": _summarize(batch.features),
                "candidates": [
                    {"label": name, "probability": round(p, 6)}
                    for name, p in context.get("candidates", [])
                ],
                "confidence": context.get("confidence", 0.0),
            }
            self._answered.clear()
        if not self._answered.wait(self.timeout):
            with self._lock:
                self._pending = None
            raise OracleError("labeling timed out")
        with self._lock:
            answer = self._answer
            self._pending = None
            self._answer = None
        return answer

    def current_query(self):
        with self._lock:
            return dict(self._pending) if self._pending else None

    def submit(self, query_id: int, label: str) -> bool:
        """Answer the pending query; False when the id is stale or unknown."""
        with self._lock:
            if not self._pending or self._pending["id"] != query_id:
                return False
            self._answer = label
            self._answered.set()
            return True


def _summarize(features: np.ndarray) -> list:
    """At most MAX_SUMMARY_POINTS representative frames, first two dims."""
    n = features.shape[0]
    idx = np.linspace(0, n - 1, min(MAX_SUMMARY_POINTS, n)).astype(int)
    pts = features[idx][:, :2]
    if pts.shape[1] < 2:
        pts = np.column_stack([pts[:, 0], np.zeros(len(pts))])
    return [[round(float(x), 4), round(float(y), 4)] for x, y in pts]


class RunService:
    """Drives a run on a worker thread and serves its oracle over HTTP."""

    def __init__(self, dataset, config, oracle: HttpOracle = None,
                 static_dir: Path = None):
        self.dataset = dataset
        self.config = config
        self.oracle = oracle or HttpOracle()
        self.static_dir = Path(static_dir) if static_dir else None
        self._status_lock = threading.Lock()
        self._status = {"state": "idle", "slot": -1,
                        "horizon": dataset.horizon, "registry": [],
                        "accuracy": None, "effort": None, "assignments": []}
        self._report = None
        self._thread = None
        self._server = None

    # -- run plumbing

    def _observer(self, event, payload):
        if event != "slot_done":
            return
        report = payload["report"]
        with self._status_lock:
            self._status.update(
                state="running",
                slot=payload["slot"],
                registry=list(payload["registry"]),
                accuracy=round(accuracy(report), 6),
                effort=round(annotation_effort(report), 6),
                # one cell per decided batch so the console's timeline always
                # traces back to a decision-log record
                assignments=[
                    {"slot": rec["slot"], "stream": rec["stream"],
                     "label": rec["final_label"], "queried": rec["queried"]}
                    for rec in report.decisions
                ],
            )

    def _run(self):
        with self._status_lock:
            self._status["state"] = "running"
        try:
            report = run(self.dataset, self.oracle, self.config,
                         observer=self._observer)
            with self._status_lock:
                self._report = report
                self._status.update(state="done", slot=self.dataset.horizon - 1,
                                    registry=list(report.class_names),
                                    accuracy=round(accuracy(report), 6),
                                    effort=round(annotation_effort(report), 6))
        except Exception as exc:   # surfaced via /api/status
            with self._status_lock:
                self._status.update(state="failed", error=str(exc))

    def start_run(self):
        self._thread = threading.Thread(target=self._run, daemon=True)
        self._thread.start()
        return self._thread

    def wait(self, timeout=None):
        self._thread.join(timeout)
        return self._report

    @property
    def report(self):
        with self._status_lock:
            return self._report

    def status(self) -> dict:
        with self._status_lock:
            out = dict(self._status)
        out["api_version"] = API_VERSION
        out["pending_query"] = self.oracle.current_query() is not None
        return out

    # -- HTTP plumbing

    def make_server(self, port: int) -> ThreadingHTTPServer:
        service = self

        class Handler(BaseHTTPRequestHandler):
            def log_message(self, *args):
                pass

            def _send(self, code, payload=None):
                body = b"" if payload is None else json.dumps(payload).encode()
                self.send_response(code)
                self.send_header("Access-Control-Allow-Origin", "*")
                self.send_header("Access-Control-Allow-Headers", "Content-Type")
                self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
                if body:
                    self.send_header("Content-Type", "application/json")
                    self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                if body:
                    self.wfile.write(body)

            def do_OPTIONS(self):
                self._send(204)

            def do_GET(self):
                if self.path == "/api/query":
                    query = service.oracle.current_query()
                    if query is None:
                        self._send(204)
                    else:
                        self._send(200, query)
                elif self.path == "/api/status":
                    self._send(200, service.status())
                elif self.path == "/api/report":
                    report = service.report
                    if report is None:
                        self._send(204)
                    else:
                        self._send(200, report.to_dict())
                else:
                    self._serve_static()

            def _serve_static(self):
                root = service.static_dir
                if root is None:
                    self._send(404, {"error": "not found"})
                    return
                rel = self.path.lstrip("/") or "index.html"
                target = (root / rel).resolve()
                if not str(target).startswith(str(root.resolve())) or not target.is_file():
                    self._send(404, {"error": "not found"})
                    return
                ctype = {"html": "text/html", "js": "text/javascript",
                         "css": "text/css"}.get(target.suffix.lstrip("."),
                                                "application/octet-stream")
                body = target.read_bytes()
                self.send_response(200)
                self.send_header("Content-Type", ctype)
                self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                self.wfile.write(body)

            def do_POST(self):
                parts = self.path.strip("/").split("/")
                if len(parts) == 4 and parts[:2] == ["api", "query"] and parts[3] == "label":
                    try:
                        query_id = int(parts[2])
                    except ValueError:
                        self._send(400, {"error": "bad query id"})
                        return
                    length = int(self.headers.get("Content-Length", 0))
                    try:
                        doc = json.loads(self.rfile.read(length) or b"{}")
                        label = doc["label"]
                        if not isinstance(label, str) or not label.strip():
                            raise ValueError("label must be a non-empty string")
                    except (ValueError, KeyError, json.JSONDecodeError) as exc:
                        self._send(400, {"error": f"malformed body: {exc}"})
                        return
                    if service.oracle.submit(query_id, label.strip()):
                        self._send(200, {"ok": True})
                    else:
                        self._send(409, {"error": "no such pending query"})
                else:
                    self._send(404, {"error": "not found"})

        server = ThreadingHTTPServer(("127.0.0.1", port), Handler)
        self._server = server
        return server

    def serve_forever(self, port: int):
        server = self.make_server(port)
        self.start_run()
        try:
            server.serve_forever()
        finally:
            server.server_close()
