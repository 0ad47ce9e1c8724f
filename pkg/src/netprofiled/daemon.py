"""Core orchestration: network changes drive profile lookup and application.

The daemon is a state machine over (disconnected | known network | pending
unknown network). Ticks feed it the current fingerprint; detector events and
capture replays feed it traffic observations. Every externally visible
outcome lands in an append-only event log with strictly increasing sequence
numbers, which the control API exposes to UIs.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Callable

from .capture import read_capture
from .detectors import MediaStreamEvent, PacketEngine, SafeSiteEvent
from .frames import parse_mac
from .modifiers import RecordingLauncher, apply_profile
from .profiles import NetworkProfile, ProfileDecodeError
from .repo import LruCache, ProfileRepository, lookup_with_cache

__all__ = [
    "Phase",
    "EventKind",
    "NotificationEvent",
    "EventLog",
    "WrongPendingIdError",
    "Daemon",
]


class Phase(str, Enum):
    DISCONNECTED = "disconnected"
    KNOWN = "known"
    PENDING = "pending"


class EventKind(str, Enum):
    UNKNOWN_NETWORK = "unknown_network"
    PROFILE_APPLIED = "profile_applied"
    SAFE_SITE = "safe_site"
    MEDIA_STREAM = "media_stream"


class WrongPendingIdError(ValueError):
    pass


@dataclass(frozen=True)
class NotificationEvent:
    seq: int
    kind: EventKind
    ts: float
    payload: dict

    def to_dict(self) -> dict:
        return {
            "seq": self.seq,
            "kind": self.kind.value,
            "ts": self.ts,
            "payload": self.payload,
        }


class EventLog:
    """Append-only, safely readable while the daemon thread appends."""

    def __init__(self) -> None:
        self._events: list[NotificationEvent] = []
        self._cond = threading.Condition()

    def append(self, kind: EventKind, payload: dict, ts: float) -> NotificationEvent:
        with self._cond:
            event = NotificationEvent(
                seq=len(self._events) + 1, kind=kind, ts=ts, payload=payload
            )
            self._events.append(event)
            self._cond.notify_all()
            return event

    def since(self, seq: int) -> list[NotificationEvent]:
        """Events with sequence number strictly greater than `seq`."""
        with self._cond:
            return self._events[seq:] if seq < len(self._events) else []

    def wait_since(self, seq: int, timeout: float) -> list[NotificationEvent]:
        """Long-poll flavor of `since`: blocks up to `timeout` seconds."""
        deadline = time.monotonic() + timeout
        with self._cond:
            while True:
                if seq < len(self._events):
                    return self._events[seq:]
                remaining = deadline - time.monotonic()
                if remaining <= 0:
                    return []
                self._cond.wait(remaining)

    def latest_seq(self) -> int:
        with self._cond:
            return len(self._events)

    def to_json(self) -> str:
        """Canonical serialization, used to compare runs byte for byte."""
        with self._cond:
            docs = [event.to_dict() for event in self._events]
        return json.dumps(docs, sort_keys=True, separators=(",", ":"))


class Daemon:
    """Single-writer state machine; callers serialize through one command
    queue (see `service`), so no locking happens here."""

    def __init__(
        self,
        repo: ProfileRepository,
        cache: LruCache,
        *,
        sandbox_root: Path | str,
        launcher=None,
        engine: PacketEngine | None = None,
        clock: Callable[[], float] | None = None,
    ) -> None:
        self.repo = repo
        self.cache = cache
        self.sandbox_root = Path(sandbox_root)
        self.launcher = launcher if launcher is not None else RecordingLauncher()
        self.engine = engine if engine is not None else PacketEngine()
        self.clock = clock if clock is not None else time.time
        self.events = EventLog()
        self.phase = Phase.DISCONNECTED
        self.current_id: str | None = None
        self.current_profile: NetworkProfile | None = None
        self.local_mac: bytes | None = None

    # -- state inspection ------------------------------------------------

    def status(self) -> dict:
        return {
            "state": self.phase.value,
            "network_id": self.current_id,
            "is_home": self.is_home_now(),
        }

    def is_home_now(self) -> bool:
        # A missing profile or flag leaves media detection on.
        if self.phase is Phase.KNOWN and self.current_profile is not None:
            return self.current_profile.is_home
        return False

    # -- fingerprint ticks -------------------------------------------------

    def tick(self, fingerprint: str | None) -> list[NotificationEvent]:
        """Process one fingerprint observation.

        Same id as the current one (known or pending): nothing happens.
        A stored network gets its profile applied; an unknown one parks the
        daemon in pending and announces it exactly once per episode.
        """
        if fingerprint is None:
            self.phase = Phase.DISCONNECTED
            self.current_id = None
            self.current_profile = None
            return []
        if fingerprint == self.current_id:
            return []
        try:
            profile = lookup_with_cache(self.repo, self.cache, fingerprint)
        except ProfileDecodeError as exc:
            self.phase = Phase.KNOWN
            self.current_id = fingerprint
            self.current_profile = None
            event = self.events.append(
                EventKind.PROFILE_APPLIED,
                {
                    "network_id": fingerprint,
                    "reports": [],
                    "error": f"stored profile is corrupt: {exc}",
                },
                self.clock(),
            )
            return [event]
        if profile is None:
            self.phase = Phase.PENDING
            self.current_id = fingerprint
            self.current_profile = None
            event = self.events.append(
                EventKind.UNKNOWN_NETWORK, {"network_id": fingerprint}, self.clock()
            )
            return [event]
        return [self._apply_and_record(fingerprint, profile)]

    def submit_pending_profile(
        self, network_id: str, profile: NetworkProfile
    ) -> list[NotificationEvent]:
        """Store the user's answers for the pending network and apply them."""
        if self.phase is not Phase.PENDING or self.current_id != network_id:
            raise WrongPendingIdError(
                f"no pending network {network_id!r}"
                + (f" (pending is {self.current_id!r})" if self.phase is Phase.PENDING else "")
            )
        self.repo.store(network_id, profile)
        self.cache.put(network_id, profile)
        return [self._apply_and_record(network_id, profile)]

    def upsert_profile(self, network_id: str, profile: NetworkProfile) -> None:
        """Store (and cache) a profile without touching the state machine."""
        self.repo.store(network_id, profile)
        self.cache.put(network_id, profile)

    def _apply_and_record(
        self, network_id: str, profile: NetworkProfile
    ) -> NotificationEvent:
        reports = apply_profile(profile, self.sandbox_root, self.launcher)
        self.phase = Phase.KNOWN
        self.current_id = network_id
        self.current_profile = profile
        return self.events.append(
            EventKind.PROFILE_APPLIED,
            {
                "network_id": network_id,
                "reports": [report.to_dict() for report in reports],
            },
            self.clock(),
        )

    # -- traffic -----------------------------------------------------------

    def on_detector_event(
        self, detected: SafeSiteEvent | MediaStreamEvent
    ) -> NotificationEvent:
        if isinstance(detected, SafeSiteEvent):
            return self.events.append(
                EventKind.SAFE_SITE, {"url": detected.url}, detected.ts
            )
        return self.events.append(
            EventKind.MEDIA_STREAM,
            {
                "content_type": detected.content_type,
                "dst_port": detected.dst_port,
                "content_length": detected.content_length,
            },
            detected.ts,
        )

    def replay_capture(
        self,
        path: Path | str,
        *,
        is_home: bool | None = None,
        local_mac: str | bytes | None = None,
    ) -> list[NotificationEvent]:
        """Run a capture file through the detectors and publish the results.

        Detector dedup state persists across replays within one daemon run,
        matching live capture semantics.
        """
        if isinstance(local_mac, str):
            mac = parse_mac(local_mac)
        elif local_mac is not None:
            mac = local_mac
        else:
            mac = self.local_mac
        if mac is None:
            raise ValueError(
                "no local MAC known; connect to a network first or pass local_mac"
            )
        home = is_home if is_home is not None else self.is_home_now()
        published = []
        for raw in read_capture(path):
            for detected in self.engine.feed(raw, local_mac=mac, is_home=home):
                published.append(self.on_detector_event(detected))
        return published
