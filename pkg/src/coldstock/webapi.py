"""HTTP front end over a Gateway, plus optional static file serving for the web client.

Endpoints (all JSON, UTF-8):

    POST /api/check                        -> {"requestId": <u>}
    GET  /api/inventory/latest             -> inventory record or 404
    GET  /api/alerts?sinceId=<u>           -> array of alert records (with log ids)
    GET  /api/events?afterId=<u>&limit=<u> -> array of {"id","tMs","kind","payload"}

The handler tolerates concurrent clients; gateway writes are serialized
inside the Gateway itself.
"""

from __future__ import annotations

import json
import mimetypes
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from .errors import ConfigError
from .gateway import Gateway


def make_handler(gateway: Gateway, check_hook=None, ui_dir: str | None = None):
    """Build a request handler class bound to one gateway.

    ``check_hook`` overrides how POST /api/check triggers the call (the
    embedded simulation routes it through its own lock); it must return the
    request id. Without a hook the gateway is asked directly.
    """

    static_root = Path(ui_dir).resolve() if ui_dir else None

    class GatewayApiHandler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, fmt, *args):  # keep test output quiet
            pass

        def _send_json(self, status: int, body) -> None:
            data = json.dumps(body).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json; charset=utf-8")
            self.send_header("Content-Length", str(len(data)))
            self.end_headers()
            self.wfile.write(data)

        def _query_uint(self, params: dict, name: str, default: int) -> int:
            raw = params.get(name, [str(default)])[0]
            value = int(raw)
            if value < 0:
                raise ValueError(name)
            return value

        def do_POST(self) -> None:
            if urlparse(self.path).path != "/api/check":
                self._send_json(404, {"error": "not found"})
                return
            try:
                request_id = check_hook() if check_hook else gateway.trigger_check()
            except ConfigError as exc:
                self._send_json(409, {"error": str(exc)})
                return
            self._send_json(200, {"requestId": request_id})

        def do_GET(self) -> None:
            parsed = urlparse(self.path)
            params = parse_qs(parsed.query)
            path = parsed.path
            if path == "/api/inventory/latest":
                latest = gateway.query_latest()
                if latest is None:
                    self._send_json(404, {"error": "no inventory yet"})
                else:
                    self._send_json(200, latest.to_json())
                return
            if path == "/api/alerts":
                try:
                    since_id = self._query_uint(params, "sinceId", 0)
                except ValueError:
                    self._send_json(400, {"error": "sinceId must be a nonnegative integer"})
                    return
                body = [
                    {"id": eid, **record.to_json()}
                    for eid, record in gateway.query_alerts(since_id)
                ]
                self._send_json(200, body)
                return
            if path == "/api/events":
                try:
                    after_id = self._query_uint(params, "afterId", 0)
                    limit = self._query_uint(params, "limit", 100)
                except ValueError:
                    self._send_json(400, {"error": "afterId and limit must be nonnegative integers"})
                    return
                self._send_json(200, [e.to_json() for e in gateway.query_events(after_id, limit)])
                return
            if static_root is not None and self._serve_static(path):
                return
            self._send_json(404, {"error": "not found"})

        def _serve_static(self, path: str) -> bool:
            relative = path.lstrip("/") or "index.html"
            candidate = (static_root / relative).resolve()
            if static_root not in candidate.parents or not candidate.is_file():
                return False
            data = candidate.read_bytes()
            ctype = mimetypes.guess_type(candidate.name)[0] or "application/octet-stream"
            self.send_response(200)
            self.send_header("Content-Type", ctype)
            self.send_header("Content-Length", str(len(data)))
            self.end_headers()
            self.wfile.write(data)
            return True

    return GatewayApiHandler


class ApiServer:
    """Threaded HTTP server wrapper with clean startup and shutdown."""

    def __init__(self, gateway: Gateway, port: int = 0, check_hook=None, ui_dir: str | None = None):
        handler = make_handler(gateway, check_hook=check_hook, ui_dir=ui_dir)
        self.httpd = ThreadingHTTPServer(("127.0.0.1", port), handler)
        self.port = self.httpd.server_address[1]
        self._thread: threading.Thread | None = None

    def start(self) -> None:
        self._thread = threading.Thread(target=self.httpd.serve_forever, daemon=True)
        self._thread.start()

    def stop(self) -> None:
        self.httpd.shutdown()
        self.httpd.server_close()
        if self._thread is not None:
            self._thread.join(timeout=5)
            self._thread = None
