"""Best-effort HTTP request/response head parsing from single TCP segments.

No stream reassembly: a head either fits in the segment or the packet is
treated as opaque (None). Binary payloads such as TLS records fail the
start-line grammar and come back as None as well.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

__all__ = [
    "HttpRequestHead",
    "HttpResponseHead",
    "parse_http_request_head",
    "parse_http_response_head",
    "get_header",
    "normalize_reason",
    "split_media_type",
]

_TOKEN = r"[!-~]+"  # printable ASCII, no whitespace
_REQUEST_LINE_RE = re.compile(rf"^({_TOKEN}) ({_TOKEN}) (HTTP/{_TOKEN})$")
_STATUS_LINE_RE = re.compile(r"^(HTTP/1\.[01]) (\d{3})(?: (.*))?$")
_HEADER_LINE_RE = re.compile(rf"^({_TOKEN}):[ \t]*(.*?)[ \t]*$")


@dataclass(frozen=True)
class HttpRequestHead:
    method: str
    target: str
    version: str
    headers: tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class HttpResponseHead:
    status_code: int
    reason: str
    version: str
    headers: tuple[tuple[str, str], ...]


def _split_head_lines(payload: bytes) -> list[str] | None:
    try:
        text = payload.decode("ascii")
    except UnicodeDecodeError:
        return None
    head = text.split("\r\n\r\n", 1)[0]
    return head.replace("\r\n", "\n").split("\n")


def _parse_headers(lines: list[str]) -> tuple[tuple[str, str], ...]:
    headers = []
    for line in lines:
        if not line:
            break
        match = _HEADER_LINE_RE.match(line)
        if match is None:
            break  # not a header line; the rest is body or noise
        headers.append((match.group(1), match.group(2)))
    return tuple(headers)


def parse_http_request_head(payload: bytes) -> HttpRequestHead | None:
    lines = _split_head_lines(payload)
    if not lines:
        return None
    match = _REQUEST_LINE_RE.match(lines[0])
    if match is None:
        return None
    return HttpRequestHead(
        method=match.group(1),
        target=match.group(2),
        version=match.group(3),
        headers=_parse_headers(lines[1:]),
    )


def parse_http_response_head(payload: bytes) -> HttpResponseHead | None:
    lines = _split_head_lines(payload)
    if not lines:
        return None
    match = _STATUS_LINE_RE.match(lines[0])
    if match is None:
        return None
    return HttpResponseHead(
        status_code=int(match.group(2)),
        reason=match.group(3) or "",
        version=match.group(1),
        headers=_parse_headers(lines[1:]),
    )


def get_header(
    headers: tuple[tuple[str, str], ...], name: str
) -> str | None:
    """First header value matching `name` case-insensitively."""
    lowered = name.lower()
    for header_name, value in headers:
        if header_name.lower() == lowered:
            return value
    return None


def normalize_reason(reason: str) -> str:
    """Collapse whitespace runs to single spaces so phrase matching is exact."""
    return " ".join(reason.split())


def split_media_type(value: str) -> tuple[str, str] | None:
    """`Content-Type` value -> (type, subtype), parameters stripped."""
    media = value.split(";", 1)[0].strip().lower()
    if media.count("/") != 1:
        return None
    kind, subtype = media.split("/")
    if not kind or not subtype:
        return None
    return kind, subtype
