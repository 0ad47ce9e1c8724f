"""Command-line front end: run the daemon, or drive a running one over HTTP.

Exit codes: 0 success, 1 API/daemon failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import signal
import sys
import threading
import urllib.error
import urllib.request
from pathlib import Path

from .api import ApiServer
from .config import DEFAULT_API_PORT, DaemonConfig, load_config
from .fingerprint import (
    MalformedReportError,
    NoAddressError,
    derive_network_id,
    first_active_snapshot,
    parse_interface_report,
    parse_resolver_config,
)
from .profiles import ProfileDecodeError, decode_profile
from .service import build_service

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

DEFAULT_API_ADDRESS = f"127.0.0.1:{DEFAULT_API_PORT}"


class CliError(Exception):
    pass


class ApiClient:
    def __init__(self, address: str) -> None:
        self.base = f"http://{address}"

    def request(self, method: str, path: str, body: dict | None = None) -> dict:
        data = json.dumps(body).encode("utf-8") if body is not None else None
        request = urllib.request.Request(
            self.base + path,
            data=data,
            method=method,
            headers={"Content-Type": "application/json"} if data else {},
        )
        try:
            with urllib.request.urlopen(request, timeout=90) as response:
                return json.loads(response.read())
        except urllib.error.HTTPError as exc:
            try:
                doc = json.loads(exc.read())
                message = doc.get("message", str(exc))
            except (json.JSONDecodeError, ValueError):
                message = str(exc)
            raise CliError(f"API error {exc.code}: {message}") from exc
        except urllib.error.URLError as exc:
            raise CliError(
                f"cannot reach daemon at {self.base}: {exc.reason}"
            ) from exc

    def get(self, path: str) -> dict:
        return self.request("GET", path)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netprofiled",
        description="network-aware profile daemon and its control client",
    )
    parser.add_argument(
        "--api",
        default=DEFAULT_API_ADDRESS,
        metavar="HOST:PORT",
        help=f"daemon control address (default {DEFAULT_API_ADDRESS})",
    )
    parser.add_argument(
        "--json", action="store_true", help="print machine-readable JSON"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="run the daemon in the foreground")
    run.add_argument("--config", type=Path, help="key=value config file")

    commands.add_parser("status", help="show daemon state")

    profile = commands.add_parser("profile", help="inspect or edit stored profiles")
    profile_commands = profile.add_subparsers(dest="profile_command", required=True)
    profile_commands.add_parser("list", help="list stored network ids")
    show = profile_commands.add_parser("show", help="print one profile")
    show.add_argument("network_id")
    set_cmd = profile_commands.add_parser(
        "set", help="store a profile from key=value pairs (profile file grammar)"
    )
    set_cmd.add_argument("network_id")
    set_cmd.add_argument("pairs", nargs="+", metavar="key=value")

    apply_cmd = commands.add_parser(
        "apply", help="treat the given network id as the current fingerprint"
    )
    apply_cmd.add_argument("network_id")

    replay = commands.add_parser(
        "replay", help="run a capture file through the traffic detectors"
    )
    replay.add_argument("capture", type=Path)
    home_group = replay.add_mutually_exclusive_group()
    home_group.add_argument(
        "--home", dest="is_home", action="store_true", default=None
    )
    home_group.add_argument("--not-home", dest="is_home", action="store_false")
    replay.add_argument(
        "--local-mac", help="MAC that marks frames as ours (default: daemon's)"
    )

    fingerprint = commands.add_parser(
        "fingerprint", help="derive the network id from captured report files"
    )
    fingerprint.add_argument("interface_report", type=Path)
    fingerprint.add_argument("resolver_config", type=Path)

    events = commands.add_parser("events", help="fetch notification events")
    events.add_argument("--since", type=int, default=0)
    events.add_argument(
        "--timeout", type=float, default=0.0, help="long-poll for this many seconds"
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except (CliError, ProfileDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "fingerprint":
        return _cmd_fingerprint(args)
    client = ApiClient(args.api)
    if args.command == "status":
        return _cmd_status(args, client)
    if args.command == "profile":
        return _cmd_profile(args, client)
    if args.command == "apply":
        return _cmd_apply(args, client)
    if args.command == "replay":
        return _cmd_replay(args, client)
    if args.command == "events":
        return _cmd_events(args, client)
    raise CliError(f"unknown command {args.command!r}")


def _cmd_run(args: argparse.Namespace) -> int:
    config = load_config(args.config) if args.config else DaemonConfig()
    service = build_service(config)
    service.start()
    server = ApiServer(
        service, port=config.api_port, ui_dir=config.ui_dir
    )
    server.start()
    print(f"netprofiled listening on {server.address}", flush=True)
    stop = threading.Event()

    def handle_signal(_signum, _frame):
        stop.set()

    signal.signal(signal.SIGINT, handle_signal)
    signal.signal(signal.SIGTERM, handle_signal)
    try:
        stop.wait()
    finally:
        server.stop()
        service.stop()
    return EXIT_OK


def _cmd_fingerprint(args: argparse.Namespace) -> int:
    try:
        report = args.interface_report.read_text(encoding="utf-8")
        resolv = args.resolver_config.read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(str(exc)) from exc
    try:
        snapshots = parse_interface_report(report)
    except MalformedReportError as exc:
        raise CliError(f"bad interface report: {exc}") from exc
    snapshot = first_active_snapshot(snapshots)
    if snapshot is None:
        raise CliError("no UP interface with an address in the report")
    try:
        network_id = derive_network_id(snapshot, parse_resolver_config(resolv))
    except NoAddressError as exc:
        raise CliError(str(exc)) from exc
    if args.json:
        print(json.dumps({"network_id": network_id, "interface": snapshot.name}))
    else:
        print(network_id)
    return EXIT_OK


def _cmd_status(args: argparse.Namespace, client: ApiClient) -> int:
    doc = client.get("/status")
    if args.json:
        print(json.dumps(doc))
    else:
        print(f"state: {doc['state']}")
        print(f"network_id: {doc['network_id'] or '-'}")
        print(f"is_home: {str(doc['is_home']).lower()}")
    return EXIT_OK


def _cmd_profile(args: argparse.Namespace, client: ApiClient) -> int:
    if args.profile_command == "list":
        doc = client.get("/profiles")
        if args.json:
            print(json.dumps(doc))
        else:
            for network_id in sorted(doc["profiles"]):
                print(network_id)
        return EXIT_OK
    if args.profile_command == "show":
        doc = client.get(f"/profiles/{args.network_id}")
        if args.json:
            print(json.dumps(doc))
        else:
            for key, value in doc.items():
                print(f"{key}: {value}")
        return EXIT_OK
    if args.profile_command == "set":
        profile, warnings = decode_profile("\n".join(args.pairs) + "\n")
        for warning in warnings:
            print(f"warning: {warning}", file=sys.stderr)
        status = client.get("/status")
        if status["state"] == "pending" and status["network_id"] == args.network_id:
            # Setting the profile of the network the daemon is waiting on is
            # the command-line version of the new-network form: store it and
            # apply it in one step.
            doc = client.request(
                "POST", f"/pending/{args.network_id}/profile", profile.to_dict()
            )
            if args.json:
                print(json.dumps(doc))
            else:
                _print_events(doc["events"])
                print(f"stored and applied {args.network_id}")
        else:
            doc = client.request(
                "PUT", f"/profiles/{args.network_id}", profile.to_dict()
            )
            if args.json:
                print(json.dumps(doc))
            else:
                print(f"stored {doc['stored']}")
        return EXIT_OK
    raise CliError(f"unknown profile command {args.profile_command!r}")


def _cmd_apply(args: argparse.Namespace, client: ApiClient) -> int:
    doc = client.request("POST", "/apply", {"network_id": args.network_id})
    if args.json:
        print(json.dumps(doc))
    else:
        _print_events(doc["events"])
        print(f"state: {doc['state']['state']} {doc['state']['network_id'] or ''}".rstrip())
    return EXIT_OK


def _cmd_replay(args: argparse.Namespace, client: ApiClient) -> int:
    body: dict = {"capture": str(args.capture.resolve())}
    if args.is_home is not None:
        body["is_home"] = args.is_home
    if args.local_mac:
        body["local_mac"] = args.local_mac
    doc = client.request("POST", "/replay", body)
    if args.json:
        print(json.dumps(doc))
    else:
        _print_events(doc["events"])
        if not doc["events"]:
            print("no detector events")
    return EXIT_OK


def _cmd_events(args: argparse.Namespace, client: ApiClient) -> int:
    path = f"/events?since={args.since}"
    if args.timeout:
        path += f"&timeout={args.timeout}"
    doc = client.get(path)
    if args.json:
        print(json.dumps(doc))
    else:
        _print_events(doc["events"])
    return EXIT_OK


def _print_events(events: list[dict]) -> None:
    for event in events:
        payload = event["payload"]
        kind = event["kind"]
        if kind == "safe_site":
            line = f"safe_site {payload['url']}"
        elif kind == "media_stream":
            line = (
                f"media_stream {payload['content_type']}"
                f" port={payload['dst_port']}"
                f" content_length={payload['content_length']}"
            )
        elif kind == "unknown_network":
            line = f"unknown_network {payload['network_id']}"
        elif kind == "profile_applied":
            changed = [
                report["modifier_name"]
                for report in payload.get("reports", [])
                if report.get("changed")
            ]
            line = f"profile_applied {payload['network_id']}"
            if changed:
                line += f" changed={','.join(changed)}"
            if payload.get("error"):
                line += f" error={payload['error']}"
        else:
            line = f"{kind} {json.dumps(payload)}"
        print(f"[{event['seq']}] {line}")


if __name__ == "__main__":
    raise SystemExit(main())
