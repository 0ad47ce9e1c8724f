"""Traffic detectors: established HTTPS tunnels and audio/video streams.

Outbound CONNECT (or port-443) requests are remembered by their TCP
acknowledgement number; an inbound segment whose sequence number matches a
remembered acknowledgement is the response to that request. A "200
Connection established" response then signals a safe (tunneled) site, once
per navigation session. Media streams are inbound "200 OK" responses with an
audio/video Content-Type and a Content-Length, reported once per destination
port because a stream's segments all arrive on one port.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .capture import RawFrame
from .frames import (
    Direction,
    DecodedPacket,
    NotIPv4Error,
    TruncatedFrameError,
    classify_direction,
    decode_frame,
)
from .http_head import (
    get_header,
    normalize_reason,
    parse_http_request_head,
    parse_http_response_head,
    split_media_type,
)

__all__ = [
    "DEFAULT_MEDIA_SUBTYPES",
    "DEFAULT_PENDING_TTL_SECS",
    "DEFAULT_PENDING_CAP",
    "DEFAULT_SESSION_WINDOW_SECS",
    "SafeSiteEvent",
    "MediaStreamEvent",
    "PendingConnect",
    "DetectorState",
    "SessionResolver",
    "PacketEngine",
    "https_on_outbound",
    "https_on_inbound",
    "media_on_inbound",
]

HTTPS_PORT = 443
CONNECT_METHOD = "CONNECT"
TUNNEL_REASON = "Connection established"
OK_REASON = "OK"

DEFAULT_MEDIA_SUBTYPES = frozenset(
    {"mp4", "mpeg", "mp3", "ogg", "webm", "x-flv", "3gpp", "quicktime", "x-ms-wmv", "wav"}
)
DEFAULT_PENDING_TTL_SECS = 30.0
DEFAULT_PENDING_CAP = 1024
DEFAULT_SESSION_WINDOW_SECS = 10.0

_PORT_SUFFIX_RE = re.compile(r":\d+$")


@dataclass(frozen=True)
class SafeSiteEvent:
    url: str
    ts: float


@dataclass(frozen=True)
class MediaStreamEvent:
    content_type: str
    dst_port: int
    content_length: int | None
    ts: float


@dataclass(frozen=True)
class PendingConnect:
    url: str
    ack_number: int
    created_at: float


@dataclass
class DetectorState:
    pending: dict[int, PendingConnect] = field(default_factory=dict)
    seen_sessions: set[int] = field(default_factory=set)
    seen_media_ports: set[int] = field(default_factory=set)
    media_subtypes: frozenset[str] = DEFAULT_MEDIA_SUBTYPES
    pending_ttl_secs: float = DEFAULT_PENDING_TTL_SECS
    pending_cap: int = DEFAULT_PENDING_CAP


class SessionResolver:
    """Maps (url, time) to a navigation session id.

    A visit log, when available, is checked first: the session of the
    latest matching visit at or before the packet time wins. Unknown hosts
    fall back to a time-window heuristic where anything within `window_secs`
    of the current session's anchor shares that session. Heuristic ids are
    allocated above the largest logged session id so the two providers never
    collide.
    """

    def __init__(
        self,
        visit_log: Sequence[tuple[str, float, int]] = (),
        window_secs: float = DEFAULT_SESSION_WINDOW_SECS,
    ) -> None:
        self._log = sorted(visit_log, key=lambda entry: entry[1])
        self._window = window_secs
        self._current_id: int | None = None
        self._anchor = 0.0
        base = max((session for _, _, session in self._log), default=0) + 1
        self._fresh = itertools.count(base)

    @classmethod
    def from_file(
        cls, path: Path | str, window_secs: float = DEFAULT_SESSION_WINDOW_SECS
    ) -> "SessionResolver":
        """Visit-log lines: `host<TAB>unix_time<TAB>session_id`, ascending time."""
        entries = []
        for number, line in enumerate(Path(path).read_text().splitlines(), start=1):
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ValueError(f"visit log line {number}: expected 3 tab-separated fields")
            entries.append((parts[0], float(parts[1]), int(parts[2])))
        return cls(entries, window_secs)

    def resolve(self, url: str, ts: float) -> int:
        host = _PORT_SUFFIX_RE.sub("", url)
        best: int | None = None
        for log_host, log_ts, session in self._log:
            if log_ts > ts:
                break
            if log_host == host:
                best = session
        if best is not None:
            return best
        if self._current_id is not None and abs(ts - self._anchor) <= self._window:
            return self._current_id
        self._current_id = next(self._fresh)
        self._anchor = ts
        return self._current_id


def https_on_outbound(state: DetectorState, packet: DecodedPacket) -> None:
    """Remember the URL of an outbound tunnel request under its ack number.

    CONNECT requests carry the URL in the request target; plain requests to
    port 443 fall back to the Host header. A payload with no recoverable URL
    (e.g. raw TLS bytes) leaves the state untouched.
    """
    head = parse_http_request_head(packet.payload)
    url: str | None = None
    if head is not None and head.method == CONNECT_METHOD:
        url = head.target
    elif packet.dst_port == HTTPS_PORT and head is not None:
        url = get_header(head.headers, "Host")
    if not url:
        return
    _prune_pending(state, packet.ts)
    state.pending[packet.ack] = PendingConnect(
        url=url, ack_number=packet.ack, created_at=packet.ts
    )
    while len(state.pending) > state.pending_cap:
        oldest = min(state.pending.values(), key=lambda entry: entry.created_at)
        del state.pending[oldest.ack_number]


def _prune_pending(state: DetectorState, now: float) -> None:
    expired = [
        ack
        for ack, entry in state.pending.items()
        if now - entry.created_at > state.pending_ttl_secs
    ]
    for ack in expired:
        del state.pending[ack]


def https_on_inbound(
    state: DetectorState, packet: DecodedPacket, sessions: SessionResolver
) -> SafeSiteEvent | None:
    """Correlate an inbound segment with a remembered request and report a
    safe site on "200 Connection established", once per session.

    The pending entry is consumed on a sequence-number match whatever the
    outcome; unmatched segments need no further tests.
    """
    entry = state.pending.pop(packet.seq, None)
    if entry is None:
        return None
    if packet.ts - entry.created_at > state.pending_ttl_secs:
        return None
    head = parse_http_response_head(packet.payload)
    if head is None or head.status_code != 200:
        return None
    if normalize_reason(head.reason) != TUNNEL_REASON:
        return None
    session = sessions.resolve(entry.url, packet.ts)
    if session in state.seen_sessions:
        return None
    state.seen_sessions.add(session)
    return SafeSiteEvent(url=entry.url, ts=packet.ts)


def media_on_inbound(
    state: DetectorState, packet: DecodedPacket, is_home: bool
) -> MediaStreamEvent | None:
    """Report an inbound audio/video response, once per destination port,
    and never on the home network.

    Requires a "200 OK" status (204 No Content responses may carry a media
    Content-Type but no stream), a media Content-Type, and a Content-Length
    header.
    """
    if is_home:
        return None
    head = parse_http_response_head(packet.payload)
    if head is None or head.status_code != 200:
        return None
    if normalize_reason(head.reason) != OK_REASON:
        return None
    content_type = get_header(head.headers, "Content-Type")
    if content_type is None:
        return None
    media = split_media_type(content_type)
    if media is None:
        return None
    kind, subtype = media
    if kind not in ("audio", "video") and not (
        kind in ("application", "x-music") and subtype in state.media_subtypes
    ):
        return None
    content_length = get_header(head.headers, "Content-Length")
    if content_length is None:
        return None
    if packet.dst_port in state.seen_media_ports:
        return None
    state.seen_media_ports.add(packet.dst_port)
    stripped = content_length.strip()
    return MediaStreamEvent(
        content_type=f"{kind}/{subtype}",
        dst_port=packet.dst_port,
        content_length=int(stripped) if stripped.isdigit() else None,
        ts=packet.ts,
    )


class PacketEngine:
    """Feeds raw frames through decode, direction, and both detectors.

    One engine per capture stream: the dedup sets live for the engine's
    lifetime, so replaying the same traffic twice reports nothing new.
    """

    def __init__(
        self,
        state: DetectorState | None = None,
        sessions: SessionResolver | None = None,
    ) -> None:
        self.state = state if state is not None else DetectorState()
        self.sessions = sessions if sessions is not None else SessionResolver()

    def feed(
        self, raw: RawFrame, *, local_mac: bytes, is_home: bool
    ) -> list[SafeSiteEvent | MediaStreamEvent]:
        try:
            packet = decode_frame(raw.data, raw.ts_sec, raw.ts_usec)
        except (TruncatedFrameError, NotIPv4Error):
            return []
        if not packet.is_tcp or packet.payload_len == 0:
            return []
        direction = classify_direction(packet, local_mac)
        events: list[SafeSiteEvent | MediaStreamEvent] = []
        if direction is Direction.OUTBOUND:
            https_on_outbound(self.state, packet)
        elif direction is Direction.INBOUND:
            safe = https_on_inbound(self.state, packet, self.sessions)
            if safe is not None:
                events.append(safe)
            media = media_on_inbound(self.state, packet, is_home)
            if media is not None:
                events.append(media)
        return events

    def feed_all(
        self, frames: Iterable[RawFrame], *, local_mac: bytes, is_home: bool
    ) -> list[SafeSiteEvent | MediaStreamEvent]:
        events: list[SafeSiteEvent | MediaStreamEvent] = []
        for raw in frames:
            events.extend(self.feed(raw, local_mac=local_mac, is_home=is_home))
        return events
