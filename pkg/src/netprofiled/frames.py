"""Ethernet/IPv4/TCP frame decoding and traffic-direction classification."""

from __future__ import annotations

import struct
from dataclasses import dataclass
from enum import Enum

__all__ = [
    "ETHERTYPE_IPV4",
    "TCP_PROTOCOL",
    "Direction",
    "DecodedPacket",
    "TruncatedFrameError",
    "NotIPv4Error",
    "decode_frame",
    "classify_direction",
    "parse_mac",
    "format_mac",
]

ETHERTYPE_IPV4 = 0x0800
TCP_PROTOCOL = 6
_ETH_HEADER_LEN = 14
_MIN_IP_HEADER_LEN = 20
_MIN_TCP_HEADER_LEN = 20


class TruncatedFrameError(ValueError):
    pass


class NotIPv4Error(ValueError):
    pass


class Direction(Enum):
    OUTBOUND = "outbound"
    INBOUND = "inbound"
    OTHER = "other"


def parse_mac(text: str) -> bytes:
    parts = text.split(":")
    if len(parts) != 6:
        raise ValueError(f"bad MAC address {text!r}")
    try:
        raw = bytes(int(part, 16) for part in parts)
    except ValueError as exc:
        raise ValueError(f"bad MAC address {text!r}") from exc
    return raw


def format_mac(raw: bytes) -> str:
    return ":".join(f"{b:02x}" for b in raw)


@dataclass(frozen=True)
class DecodedPacket:
    frame: bytes
    ts_sec: int
    ts_usec: int
    src_mac: bytes
    dst_mac: bytes
    ip_proto: int
    src_ip: str
    dst_ip: str
    src_port: int
    dst_port: int
    seq: int
    ack: int
    payload_offset: int
    payload_len: int

    @property
    def is_tcp(self) -> bool:
        return self.ip_proto == TCP_PROTOCOL

    @property
    def payload(self) -> bytes:
        return self.frame[self.payload_offset : self.payload_offset + self.payload_len]

    @property
    def ts(self) -> float:
        return self.ts_sec + self.ts_usec / 1_000_000


def decode_frame(frame: bytes, ts_sec: int = 0, ts_usec: int = 0) -> DecodedPacket:
    """Decode an Ethernet II / IPv4 / TCP frame from fixed header offsets.

    The application payload starts after the TCP header, so its length is
    frame length minus 14, minus IHL*4, minus data-offset*4; a frame whose
    headers claim more bytes than it carries is truncated. Non-TCP IPv4
    frames decode with zeroed transport fields so detectors can skip them.
    """
    if len(frame) < _ETH_HEADER_LEN + _MIN_IP_HEADER_LEN:
        raise TruncatedFrameError(f"frame of {len(frame)} bytes is too short")
    (ethertype,) = struct.unpack_from(">H", frame, 12)
    if ethertype != ETHERTYPE_IPV4:
        raise NotIPv4Error(f"ethertype 0x{ethertype:04x}")
    version_ihl = frame[_ETH_HEADER_LEN]
    if version_ihl >> 4 != 4:
        raise NotIPv4Error(f"IP version {version_ihl >> 4}")
    ihl = version_ihl & 0x0F
    if ihl < 5:
        raise TruncatedFrameError(f"bad IHL {ihl}")
    ip_end = _ETH_HEADER_LEN + ihl * 4
    if len(frame) < ip_end:
        raise TruncatedFrameError("frame shorter than IP header")

    dst_mac = frame[0:6]
    src_mac = frame[6:12]
    ip_proto = frame[_ETH_HEADER_LEN + 9]
    src_ip = ".".join(str(b) for b in frame[_ETH_HEADER_LEN + 12 : _ETH_HEADER_LEN + 16])
    dst_ip = ".".join(str(b) for b in frame[_ETH_HEADER_LEN + 16 : _ETH_HEADER_LEN + 20])

    if ip_proto != TCP_PROTOCOL:
        return DecodedPacket(
            frame=frame,
            ts_sec=ts_sec,
            ts_usec=ts_usec,
            src_mac=src_mac,
            dst_mac=dst_mac,
            ip_proto=ip_proto,
            src_ip=src_ip,
            dst_ip=dst_ip,
            src_port=0,
            dst_port=0,
            seq=0,
            ack=0,
            payload_offset=ip_end,
            payload_len=len(frame) - ip_end,
        )

    if len(frame) < ip_end + _MIN_TCP_HEADER_LEN:
        raise TruncatedFrameError("frame shorter than TCP header")
    src_port, dst_port = struct.unpack_from(">HH", frame, ip_end)
    seq, ack = struct.unpack_from(">II", frame, ip_end + 4)
    data_offset = frame[ip_end + 12] >> 4
    if data_offset < 5:
        raise TruncatedFrameError(f"bad TCP data offset {data_offset}")
    payload_offset = ip_end + data_offset * 4
    if payload_offset > len(frame):
        raise TruncatedFrameError("TCP header extends past frame end")

    return DecodedPacket(
        frame=frame,
        ts_sec=ts_sec,
        ts_usec=ts_usec,
        src_mac=src_mac,
        dst_mac=dst_mac,
        ip_proto=ip_proto,
        src_ip=src_ip,
        dst_ip=dst_ip,
        src_port=src_port,
        dst_port=dst_port,
        seq=seq,
        ack=ack,
        payload_offset=payload_offset,
        payload_len=len(frame) - payload_offset,
    )


def classify_direction(packet: DecodedPacket, local_mac: bytes) -> Direction:
    """Outbound when the source MAC is ours, inbound when the destination is;
    the source check wins so the two can never both hold."""
    if packet.src_mac == local_mac:
        return Direction.OUTBOUND
    if packet.dst_mac == local_mac:
        return Direction.INBOUND
    return Direction.OTHER
