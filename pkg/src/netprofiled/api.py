"""Loopback HTTP control surface: status, profiles, events, replay.

Every mutating endpoint proxies exactly one daemon operation through the
service's command queue; the event feed reads the append-only log directly
and supports long-polling via `GET /events?since=n&timeout=s`.
"""

from __future__ import annotations

import json
import logging
import mimetypes
import re
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, unquote, urlparse

from .daemon import WrongPendingIdError
from .profiles import NetworkProfile, ProfileDecodeError
from .repo import InvalidNetworkIdError
from .service import DaemonService

__all__ = ["ApiServer", "ApiError"]

log = logging.getLogger(__name__)

MAX_POLL_TIMEOUT_SECS = 60.0
_PROFILE_PATH_RE = re.compile(r"^/profiles/([^/]+)$")
_PENDING_PATH_RE = re.compile(r"^/pending/([^/]+)/profile$")


class ApiError(Exception):
    """Maps a failure mode onto one of the wire status codes."""

    def __init__(self, code: int, message: str) -> None:
        assert code in (400, 404, 409, 500)
        super().__init__(message)
        self.code = code
        self.message = message


class ApiServer:
    def __init__(
        self,
        service: DaemonService,
        host: str = "127.0.0.1",
        port: int = 0,
        ui_dir: Path | str | None = None,
    ) -> None:
        self.service = service
        self.ui_dir = Path(ui_dir) if ui_dir is not None else None
        handler = _make_handler(self)
        self._server = ThreadingHTTPServer((host, port), handler)
        self._server.daemon_threads = True
        self._thread: threading.Thread | None = None

    @property
    def host(self) -> str:
        return self._server.server_address[0]

    @property
    def port(self) -> int:
        return self._server.server_address[1]

    @property
    def address(self) -> str:
        return f"{self.host}:{self.port}"

    def start(self) -> None:
        self._thread = threading.Thread(
            target=lambda: self._server.serve_forever(poll_interval=0.05),
            name="netprofiled-api",
            daemon=True,
        )
        self._thread.start()

    def stop(self) -> None:
        self._server.shutdown()
        self._server.server_close()
        if self._thread is not None:
            self._thread.join(timeout=5)
            self._thread = None


def _make_handler(api: ApiServer):
    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"
        server_version = "netprofiled"

        # -- plumbing ----------------------------------------------------

        def log_message(self, fmt, *args):  # noqa: N802 - stdlib naming
            log.debug("%s - %s", self.address_string(), fmt % args)

        def _send_json(self, code: int, doc) -> None:
            body = json.dumps(doc).encode("utf-8")
            self.send_response(code)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.end_headers()
            self.wfile.write(body)

        def _send_error(self, error: ApiError) -> None:
            self._send_json(error.code, {"code": error.code, "message": error.message})

        def _read_body(self):
            length = int(self.headers.get("Content-Length") or 0)
            raw = self.rfile.read(length) if length else b""
            if not raw:
                return {}
            try:
                return json.loads(raw)
            except json.JSONDecodeError as exc:
                raise ApiError(400, f"request body is not valid JSON: {exc}") from exc

        def _call(self, command):
            """Run a daemon command, translating failures to wire codes."""
            try:
                return api.service.call(command)
            except ApiError:
                raise
            except WrongPendingIdError as exc:
                raise ApiError(409, str(exc)) from exc
            except (InvalidNetworkIdError, ProfileDecodeError, ValueError) as exc:
                raise ApiError(400, str(exc)) from exc
            except FileNotFoundError as exc:
                raise ApiError(404, str(exc)) from exc
            except Exception as exc:  # noqa: BLE001
                log.exception("command failed")
                raise ApiError(500, f"{type(exc).__name__}: {exc}") from exc

        # -- verbs ---------------------------------------------------------

        def do_OPTIONS(self):  # noqa: N802
            self.send_response(204)
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Methods", "GET, PUT, POST, OPTIONS")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")
            self.send_header("Content-Length", "0")
            self.end_headers()

        def do_GET(self):  # noqa: N802
            try:
                self._route_get()
            except ApiError as error:
                self._send_error(error)

        def do_PUT(self):  # noqa: N802
            try:
                self._route_put()
            except ApiError as error:
                self._send_error(error)

        def do_POST(self):  # noqa: N802
            try:
                self._route_post()
            except ApiError as error:
                self._send_error(error)

        # -- routes ----------------------------------------------------------

        def _route_get(self) -> None:
            url = urlparse(self.path)
            if url.path == "/status":
                self._send_json(200, self._call(lambda d: d.status()))
                return
            if url.path == "/profiles":
                def list_profiles(daemon):
                    docs = {}
                    for network_id in daemon.repo.list_ids():
                        try:
                            profile = daemon.repo.load(network_id)
                        except ProfileDecodeError as exc:
                            log.warning("skipping corrupt profile %s: %s", network_id, exc)
                            continue
                        if profile is not None:
                            docs[network_id] = profile.to_dict()
                    return docs

                self._send_json(200, {"profiles": self._call(list_profiles)})
                return
            match = _PROFILE_PATH_RE.match(url.path)
            if match:
                network_id = unquote(match.group(1))
                profile = self._call(lambda d: d.repo.load(network_id))
                if profile is None:
                    raise ApiError(404, f"no profile for {network_id!r}")
                self._send_json(200, profile.to_dict())
                return
            if url.path == "/events":
                query = parse_qs(url.query)
                since = _int_param(query, "since", 0)
                timeout = min(
                    _float_param(query, "timeout", 0.0), MAX_POLL_TIMEOUT_SECS
                )
                event_log = api.service.events
                if timeout > 0:
                    events = event_log.wait_since(since, timeout)
                else:
                    events = event_log.since(since)
                self._send_json(
                    200,
                    {
                        "events": [event.to_dict() for event in events],
                        "latest_seq": event_log.latest_seq(),
                    },
                )
                return
            if api.ui_dir is not None and (
                url.path == "/ui" or url.path.startswith("/ui/")
            ):
                self._serve_static(url.path)
                return
            raise ApiError(404, f"no route for GET {url.path}")

        def _route_put(self) -> None:
            url = urlparse(self.path)
            match = _PROFILE_PATH_RE.match(url.path)
            if not match:
                raise ApiError(404, f"no route for PUT {url.path}")
            network_id = unquote(match.group(1))
            profile = _profile_from_body(self._read_body())
            self._call(lambda d: d.upsert_profile(network_id, profile))
            self._send_json(200, {"stored": network_id})

        def _route_post(self) -> None:
            url = urlparse(self.path)
            match = _PENDING_PATH_RE.match(url.path)
            if match:
                network_id = unquote(match.group(1))
                profile = _profile_from_body(self._read_body())
                events = self._call(
                    lambda d: d.submit_pending_profile(network_id, profile)
                )
                self._send_json(
                    200,
                    {
                        "events": [event.to_dict() for event in events],
                        "state": self._call(lambda d: d.status()),
                    },
                )
                return
            if url.path == "/apply":
                body = self._read_body()
                network_id = body.get("network_id")
                if not isinstance(network_id, str) or not network_id:
                    raise ApiError(400, "body must carry a network_id string")
                events = self._call(lambda d: d.tick(network_id))
                self._send_json(
                    200,
                    {
                        "events": [event.to_dict() for event in events],
                        "state": self._call(lambda d: d.status()),
                    },
                )
                return
            if url.path == "/replay":
                body = self._read_body()
                capture = body.get("capture")
                if not isinstance(capture, str) or not capture:
                    raise ApiError(400, "body must carry a capture file path")
                is_home = body.get("is_home")
                if is_home is not None and not isinstance(is_home, bool):
                    raise ApiError(400, "is_home must be a boolean")
                local_mac = body.get("local_mac")
                if local_mac is not None and not isinstance(local_mac, str):
                    raise ApiError(400, "local_mac must be a string")
                events = self._call(
                    lambda d: d.replay_capture(
                        capture, is_home=is_home, local_mac=local_mac
                    )
                )
                self._send_json(
                    200, {"events": [event.to_dict() for event in events]}
                )
                return
            raise ApiError(404, f"no route for POST {url.path}")

        # -- static UI ---------------------------------------------------------

        def _serve_static(self, path: str) -> None:
            relative = path[len("/ui") :].lstrip("/") or "index.html"
            target = (api.ui_dir / relative).resolve()
            root = api.ui_dir.resolve()
            if root not in target.parents and target != root:
                raise ApiError(404, "not found")
            if target.is_dir():
                target = target / "index.html"
            if not target.is_file():
                raise ApiError(404, f"no static file {relative!r}")
            body = target.read_bytes()
            content_type = (
                mimetypes.guess_type(target.name)[0] or "application/octet-stream"
            )
            self.send_response(200)
            self.send_header("Content-Type", content_type)
            self.send_header("Content-Length", str(len(body)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.end_headers()
            self.wfile.write(body)

    return Handler


def _profile_from_body(body) -> NetworkProfile:
    try:
        return NetworkProfile.from_dict(body)
    except ValueError as exc:
        raise ApiError(400, str(exc)) from exc


def _int_param(query: dict, name: str, default: int) -> int:
    try:
        return int(query.get(name, [default])[0])
    except ValueError as exc:
        raise ApiError(400, f"{name} must be an integer") from exc


def _float_param(query: dict, name: str, default: float) -> float:
    try:
        return float(query.get(name, [default])[0])
    except ValueError as exc:
        raise ApiError(400, f"{name} must be a number") from exc
