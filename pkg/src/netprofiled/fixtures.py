"""Synthetic frames and capture files for tests and demo scripts.

These builders exist so the detector pipeline can be driven without
privileged capture; they are not part of the capture-reading contract.
"""

from __future__ import annotations

import struct
from pathlib import Path

from .capture import LINKTYPE_ETHERNET, PCAP_MAGIC, RawFrame
from .frames import ETHERTYPE_IPV4, TCP_PROTOCOL, parse_mac

__all__ = [
    "build_tcp_frame",
    "build_pcap",
    "write_pcap",
    "http_payload",
    "raw_frames",
    "TimedFrame",
]

TimedFrame = tuple[bytes, int, int]  # (frame bytes, ts_sec, ts_usec)


def _pack_ip(text: str) -> bytes:
    parts = [int(p) for p in text.split(".")]
    if len(parts) != 4 or any(p > 255 for p in parts):
        raise ValueError(f"bad IPv4 address {text!r}")
    return bytes(parts)


def http_payload(*lines: str) -> bytes:
    """CRLF-join the given head lines and terminate the head."""
    return ("\r\n".join(lines) + "\r\n\r\n").encode("ascii")


def build_tcp_frame(
    *,
    src_mac: str,
    dst_mac: str,
    src_ip: str,
    dst_ip: str,
    src_port: int,
    dst_port: int,
    seq: int,
    ack: int,
    payload: bytes = b"",
    ip_options: bytes = b"",
    tcp_options: bytes = b"",
    ip_proto: int = TCP_PROTOCOL,
) -> bytes:
    """Assemble an Ethernet II / IPv4 / TCP frame.

    Options must be multiples of 4 bytes; they widen IHL and the TCP data
    offset accordingly. Checksums are left zero, the decoder ignores them.
    """
    if len(ip_options) % 4 or len(tcp_options) % 4:
        raise ValueError("options must be 4-byte aligned")
    ihl = 5 + len(ip_options) // 4
    data_offset = 5 + len(tcp_options) // 4
    if ihl > 15 or data_offset > 15:
        raise ValueError("options too long")

    eth = parse_mac(dst_mac) + parse_mac(src_mac) + struct.pack(">H", ETHERTYPE_IPV4)
    total_len = ihl * 4 + data_offset * 4 + len(payload)
    ip = (
        struct.pack(
            ">BBHHHBBH",
            (4 << 4) | ihl,
            0,
            total_len,
            0x0001,
            0,
            64,
            ip_proto,
            0,
        )
        + _pack_ip(src_ip)
        + _pack_ip(dst_ip)
        + ip_options
    )
    tcp = (
        struct.pack(
            ">HHIIBBHHH",
            src_port,
            dst_port,
            seq,
            ack,
            data_offset << 4,
            0x18,  # PSH|ACK
            0xFFFF,
            0,
            0,
        )
        + tcp_options
    )
    return eth + ip + tcp + payload


def build_pcap(
    frames: list[TimedFrame], *, swapped: bool = False, snaplen: int = 65535
) -> bytes:
    """Serialize frames into a classic Ethernet capture byte string."""
    order = ">" if swapped else "<"
    out = struct.pack(
        order + "IHHiIII", PCAP_MAGIC, 2, 4, 0, 0, snaplen, LINKTYPE_ETHERNET
    )
    for data, ts_sec, ts_usec in frames:
        out += struct.pack(order + "IIII", ts_sec, ts_usec, len(data), len(data))
        out += data
    return out


def write_pcap(path: Path | str, frames: list[TimedFrame], **kwargs) -> Path:
    path = Path(path)
    path.write_bytes(build_pcap(frames, **kwargs))
    return path


def raw_frames(frames: list[TimedFrame]) -> list[RawFrame]:
    """Convenience: feed builders straight into an engine without a file."""
    return [RawFrame(data=data, ts_sec=sec, ts_usec=usec) for data, sec, usec in frames]
