"""Daemon wiring: one command loop owns all state mutation.

API handlers and the fingerprint poller never touch the daemon directly;
they enqueue callables that the single worker thread executes in order.
The event log is the only thing read concurrently.
"""

from __future__ import annotations

import logging
import queue
import subprocess
import threading
from concurrent.futures import Future
from pathlib import Path
from typing import Callable

from .config import DaemonConfig
from .daemon import Daemon
from .detectors import DetectorState, PacketEngine, SessionResolver
from .fingerprint import (
    InterfaceSnapshot,
    derive_network_id,
    first_active_snapshot,
    parse_interface_report,
    parse_resolver_config,
)
from .frames import parse_mac
from .modifiers import SubprocessLauncher
from .repo import LruCache, ProfileRepository

__all__ = [
    "DaemonService",
    "FileFingerprintProvider",
    "LiveFingerprintProvider",
    "ScriptedFingerprintProvider",
    "build_service",
]

log = logging.getLogger(__name__)

Fingerprint = tuple[str, InterfaceSnapshot]


class FileFingerprintProvider:
    """Reads interface-report and resolver files on every poll; lets a file
    edit stand in for a network change."""

    def __init__(self, report_path: Path | str, resolv_path: Path | str | None) -> None:
        self.report_path = Path(report_path)
        self.resolv_path = Path(resolv_path) if resolv_path else None

    def current(self) -> Fingerprint | None:
        try:
            report = self.report_path.read_text(encoding="utf-8")
        except FileNotFoundError:
            return None
        resolv = ""
        if self.resolv_path is not None:
            try:
                resolv = self.resolv_path.read_text(encoding="utf-8")
            except FileNotFoundError:
                resolv = ""
        snapshot = first_active_snapshot(parse_interface_report(report))
        if snapshot is None:
            return None
        dns = parse_resolver_config(resolv)
        return derive_network_id(snapshot, dns), snapshot


class LiveFingerprintProvider:
    """Shells out to the interface tool; exercised manually, not in tests."""

    def __init__(self, command: str = "ifconfig -a", resolv_path: str = "/etc/resolv.conf"):
        self.command = command
        self.resolv_path = Path(resolv_path)

    def current(self) -> Fingerprint | None:
        try:
            report = subprocess.run(
                self.command.split(),
                capture_output=True,
                text=True,
                timeout=10,
                check=True,
            ).stdout
        except (OSError, subprocess.SubprocessError):
            return None
        try:
            resolv = self.resolv_path.read_text(encoding="utf-8")
        except OSError:
            resolv = ""
        snapshot = first_active_snapshot(parse_interface_report(report))
        if snapshot is None:
            return None
        return derive_network_id(snapshot, parse_resolver_config(resolv)), snapshot


class ScriptedFingerprintProvider:
    """Replays a fixed fingerprint sequence, then holds the last value."""

    def __init__(self, sequence: list[Fingerprint | None]) -> None:
        self._sequence = list(sequence)
        self._index = 0

    def current(self) -> Fingerprint | None:
        if not self._sequence:
            return None
        value = self._sequence[min(self._index, len(self._sequence) - 1)]
        self._index += 1
        return value


_STOP = object()


class DaemonService:
    """Runs the daemon behind a command queue plus an optional poller."""

    def __init__(
        self,
        daemon: Daemon,
        provider=None,
        poll_interval_secs: float = 2.0,
    ) -> None:
        self.daemon = daemon
        self.provider = provider
        self.poll_interval_secs = poll_interval_secs
        self._commands: queue.Queue = queue.Queue()
        self._worker: threading.Thread | None = None
        self._poller: threading.Thread | None = None
        self._stop_polling = threading.Event()

    @property
    def events(self):
        return self.daemon.events

    def start(self) -> None:
        self._worker = threading.Thread(
            target=self._run_commands, name="netprofiled-commands", daemon=True
        )
        self._worker.start()
        if self.provider is not None:
            self._poller = threading.Thread(
                target=self._run_poller, name="netprofiled-poller", daemon=True
            )
            self._poller.start()

    def stop(self) -> None:
        self._stop_polling.set()
        if self._poller is not None:
            self._poller.join(timeout=5)
            self._poller = None
        if self._worker is not None:
            self._commands.put((_STOP, None))
            self._worker.join(timeout=5)
            self._worker = None

    def call(self, command: Callable[[Daemon], object]):
        """Run `command(daemon)` on the worker thread and return its result."""
        if self._worker is None or not self._worker.is_alive():
            raise RuntimeError("service is not running")
        future: Future = Future()
        self._commands.put((command, future))
        return future.result()

    def _run_commands(self) -> None:
        while True:
            command, future = self._commands.get()
            if command is _STOP:
                return
            try:
                result = command(self.daemon)
            except BaseException as exc:  # noqa: BLE001 - report to caller
                future.set_exception(exc)
            else:
                future.set_result(result)

    def _run_poller(self) -> None:
        while not self._stop_polling.is_set():
            self.poll_once()
            self._stop_polling.wait(self.poll_interval_secs)

    def poll_once(self) -> None:
        try:
            observed = self.provider.current()
        except Exception:  # noqa: BLE001 - a bad report should not kill the loop
            log.exception("fingerprint provider failed; skipping poll")
            return

        def command(daemon: Daemon):
            if observed is None:
                return daemon.tick(None)
            network_id, snapshot = observed
            if snapshot.hw_addr is not None:
                daemon.local_mac = parse_mac(snapshot.hw_addr)
            return daemon.tick(network_id)

        try:
            self.call(command)
        except RuntimeError:
            pass  # service stopping


def build_service(config: DaemonConfig, *, clock=None) -> DaemonService:
    """Assemble repository, cache, detectors, and providers from a config."""
    repo = ProfileRepository.under_home(config.home_root)
    cache = LruCache(config.cache_capacity)
    if config.visit_log_path is not None and Path(config.visit_log_path).is_file():
        sessions = SessionResolver.from_file(
            config.visit_log_path, config.session_window_secs
        )
    else:
        sessions = SessionResolver(window_secs=config.session_window_secs)
    engine = PacketEngine(
        DetectorState(media_subtypes=config.media_subtypes), sessions
    )
    daemon = Daemon(
        repo,
        cache,
        sandbox_root=config.home_root,
        launcher=SubprocessLauncher(),
        engine=engine,
        clock=clock,
    )
    if config.interface_report_path is not None:
        provider = FileFingerprintProvider(
            config.interface_report_path, config.resolv_conf_path
        )
    else:
        provider = LiveFingerprintProvider(
            resolv_path=str(config.resolv_conf_path or "/etc/resolv.conf")
        )
    return DaemonService(daemon, provider, config.poll_interval_secs)
