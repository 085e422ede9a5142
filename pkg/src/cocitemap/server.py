"""Read-only HTTP serving of a validated snapshot plus viewer assets."""

from __future__ import annotations

import json
import mimetypes
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from . import __version__
from .snapshot import validate_snapshot


class SnapshotValidationError(ValueError):
    def __init__(self, violations: list[str]):
        super().__init__("snapshot failed validation:\n" + "\n".join(violations))
        self.violations = violations


def _make_handler(snapshot_bytes: bytes, schema_version: str, assets_dir: Path | None):
    class Handler(BaseHTTPRequestHandler):
        def log_message(self, fmt, *args):  # quiet by default
            pass

        def _send(self, status: int, content_type: str, body: bytes) -> None:
            self.send_response(status)
            self.send_header("Content-Type", content_type)
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def do_GET(self):  # noqa: N802 (http.server API)
            path = self.path.split("?", 1)[0]
            if path == "/api/snapshot":
                self._send(200, "application/json; charset=utf-8", snapshot_bytes)
            elif path == "/api/health":
                body = json.dumps(
                    {"status": "ok", "version": __version__, "schema_version": schema_version},
                    sort_keys=True,
                ).encode("utf-8")
                self._send(200, "application/json; charset=utf-8", body)
            elif assets_dir is not None:
                self._send_asset(path)
            else:
                self._send(404, "text/plain; charset=utf-8", b"not found")

        def _send_asset(self, path: str) -> None:
            rel = path.lstrip("/") or "index.html"
            target = (assets_dir / rel).resolve()
            if not str(target).startswith(str(assets_dir.resolve())) or not target.is_file():
                self._send(404, "text/plain; charset=utf-8", b"not found")
                return
            ctype = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
            self._send(200, ctype, target.read_bytes())

        def do_POST(self):  # noqa: N802
            self._send(405, "text/plain; charset=utf-8", b"read-only service")

        do_PUT = do_POST
        do_DELETE = do_POST

    return Handler


def make_server(
    snapshot_path: str, port: int = 8040, assets_dir: str | None = None
) -> ThreadingHTTPServer:
    """Build the HTTP server; refuses invalid snapshots.

    The snapshot endpoint serves the file bytes untouched, so responses are
    byte-identical to the file on disk.
    """
    violations = validate_snapshot(snapshot_path)
    if violations:
        raise SnapshotValidationError(violations)
    raw = Path(snapshot_path).read_bytes()
    schema_version = json.loads(raw)["schema_version"]
    handler = _make_handler(raw, schema_version, Path(assets_dir) if assets_dir else None)
    return ThreadingHTTPServer(("127.0.0.1", port), handler)


def serve_snapshot(snapshot_path: str, port: int = 8040, assets_dir: str | None = None) -> None:
    server = make_server(snapshot_path, port, assets_dir)
    host, actual_port = server.server_address[:2]
    print(f"serving snapshot on http://{host}:{actual_port}/ (ctrl-c to stop)")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
