"""Line-delimited JSON protocol over a local TCP socket.

One session per service process; requests are applied under a single lock so
every response reflects exactly one operation.  Optimization runs on a
worker thread and streams progress events to the requesting connection
before its final response.  The full message schema lives in
docs/protocol.md.
"""

from __future__ import annotations

import json
import os
import socketserver
import threading

from .dataset import load_csv
from .errors import HyperballError, ProtocolError
from .session import Session

DEFAULT_PORT = 9191
PORT_ENV_VAR = "HYPERBALL_PORT"


def default_port():
    return int(os.environ.get(PORT_ENV_VAR, DEFAULT_PORT))


class SessionService:
    """Protocol dispatcher around one Session."""

    def __init__(self, session=None):
        self.session = session or Session()
        self.lock = threading.Lock()
        self.cancel_event = threading.Event()
        self._optimizing = False

    def handle(self, request, emit=None):
        """Apply one request dict and return the response dict.

        `emit`, when given, receives out-of-band event dicts (optimizer
        progress) while the request is being served.
        """
        if not isinstance(request, dict) or "op" not in request:
            raise ProtocolError("request must be an object with an 'op' field")
        op = request["op"]
        handler = getattr(self, f"_op_{op}", None)
        if handler is None:
            raise ProtocolError(f"unknown op {op!r}", code="unknown_op")
        emit = emit or (lambda event: None)
        if op == "optimize":
            # Runs on the caller's connection thread without the session
            # lock so other connections stay responsive and can cancel it.
            result = handler(request, emit)
        else:
            with self.lock:
                result = handler(request, emit)
        response = {"ok": True}
        if request.get("id") is not None:
            response["id"] = request["id"]
        if result:
            response.update(result)
        if op not in ("list_views", "save_session") and self.session.dataset is not None:
            response["frame"] = self.session.frame()
        return response

    def error_response(self, exc, request=None):
        code = exc.code if isinstance(exc, ProtocolError) else type(exc).__name__
        response = {"ok": False, "error": {"code": code, "message": str(exc)}}
        if isinstance(request, dict) and request.get("id") is not None:
            response["id"] = request["id"]
        return response

    @staticmethod
    def _require(request, *fields):
        missing = [f for f in fields if f not in request]
        if missing:
            raise ProtocolError(f"missing fields: {', '.join(missing)}")

    def _need_data(self):
        if self.session.dataset is None:
            raise ProtocolError("no dataset loaded", code="no_dataset")

    # ------------------------------------------------------------- handlers

    def _op_load_data(self, request, emit):
        self._require(request, "path")
        dataset = load_csv(request["path"], class_column=request.get("class_column"))
        self.session.load_dataset(dataset)
        return {
            "n_points": dataset.n_points,
            "n_dims": dataset.n_dims,
            "attributes": dataset.attributes,
            "dropped_rows": dataset.report.dropped_rows,
            "constant_columns": dataset.report.constant_columns,
        }

    def _op_get_frame(self, request, emit):
        self._need_data()
        self.session.release()
        return {}

    def _op_drag(self, request, emit):
        self._need_data()
        self._require(request, "button", "from", "to")
        self.session.drag(
            request["button"], request["from"], request["to"],
            pinned_dim=request.get("pinned_dim"),
        )
        return {}

    def _op_deep(self, request, emit):
        self._need_data()
        self._require(request, "amount")
        self.session.deep(request["amount"])
        return {}

    def _op_equal_express(self, request, emit):
        self._need_data()
        self._require(request, "dims")
        self.session.equal_express(request["dims"])
        return {}

    def _op_align(self, request, emit):
        self._need_data()
        self._require(request, "dim", "target")
        self.session.align(request["dim"], request["target"], request.get("step", 0.25))
        return {}

    def _op_optimize(self, request, emit):
        with self.lock:
            self._need_data()
            if self._optimizing:
                raise ProtocolError("an optimization is already running", code="busy")
            self._optimizing = True
            self.cancel_event.clear()

        def on_generation(gen, best):
            emit({"event": "optimize_progress", "generation": gen, "best_score": best})
            return not self.cancel_event.is_set()

        try:
            result = self.session.optimize(
                scope=request.get("scope", "narrow"),
                metric_kind=request.get("metric"),
                on_generation=on_generation,
            )
        finally:
            with self.lock:
                self._optimizing = False
        return {
            "score": result.score,
            "trace": [float(v) for v in result.trace],
            "cancelled": self.cancel_event.is_set(),
        }

    def _op_cancel_optimize(self, request, emit):
        self.cancel_event.set()
        return {"cancelled": True}

    def _op_cluster(self, request, emit):
        self._need_data()
        self._require(request, "k")
        clusters = self.session.cluster_subspaces(int(request["k"]))
        return {
            "clusters": [
                {
                    "color_tag": c.color_tag,
                    "size": int(len(c.member_ids)),
                    "member_ids": c.member_ids.tolist(),
                }
                for c in clusters
            ]
        }

    def _op_save_view(self, request, emit):
        self._need_data()
        view = self.session.save_view(name=request.get("name"))
        return {"view_id": view.view_id, "name": view.name}

    def _op_list_views(self, request, emit):
        return {
            "views": [
                {"view_id": v.view_id, "name": v.name, "created_at": v.created_at}
                for v in self.session.views.values()
            ]
        }

    def _op_restore_view(self, request, emit):
        self._need_data()
        self._require(request, "id")
        self.session.restore_view(request["id"])
        return {}

    def _op_build_path(self, request, emit):
        self._need_data()
        self._require(request, "view_ids")
        ids = self.session.build_path(request["view_ids"])
        return {"path": ids}

    def _op_path_t(self, request, emit):
        self._need_data()
        self._require(request, "t")
        self.session.path_t(request["t"])
        return {}

    def _op_path_next(self, request, emit):
        self._need_data()
        self.session.path_next()
        return {"cursor": self.session.path_cursor}

    def _op_brush(self, request, emit):
        self._need_data()
        self._require(request, "ids", "action")
        self.session.brush_points(
            request["ids"], request["action"], color=request.get("color")
        )
        return {}

    def _op_set_config(self, request, emit):
        self._require(request, "config")
        self.session.set_config(request["config"])
        if "zoom" in request:
            self.session.set_zoom(request["zoom"])
        return {}

    def _op_save_session(self, request, emit):
        self._require(request, "path")
        self.session.save_session(request["path"])
        return {"path": request["path"]}

    def _op_load_session(self, request, emit):
        self._require(request, "path")
        self.session = Session.load_session(request["path"])
        return {}


class _Handler(socketserver.StreamRequestHandler):
    def handle(self):
        service = self.server.service

        def emit(event):
            self._send(event)

        for line in self.rfile:
            line = line.strip()
            if not line:
                continue
            request = None
            try:
                request = json.loads(line)
                response = service.handle(request, emit=emit)
            except (HyperballError, ValueError, OSError) as exc:
                response = service.error_response(exc, request)
            self._send(response)

    def _send(self, payload):
        self.wfile.write(json.dumps(payload).encode("utf-8") + b"\n")
        self.wfile.flush()


class Server(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True

    def __init__(self, port=None, session=None, host="127.0.0.1"):
        self.service = SessionService(session=session)
        super().__init__((host, port if port is not None else default_port()), _Handler)


def serve(port=None, session=None):
    """Run the service until interrupted."""
    server = Server(port=port, session=session)
    try:
        server.serve_forever()
    finally:
        server.server_close()
