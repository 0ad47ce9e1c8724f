"""Classic capture-file reading for deterministic offline frame replay."""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path
from typing import BinaryIO, Iterator

__all__ = [
    "PCAP_MAGIC",
    "LINKTYPE_ETHERNET",
    "RawFrame",
    "CaptureReader",
    "BadMagicError",
    "UnsupportedLinkTypeError",
    "TruncatedRecordError",
    "open_capture",
    "read_capture",
]

PCAP_MAGIC = 0xA1B2C3D4
LINKTYPE_ETHERNET = 1
GLOBAL_HEADER_LEN = 24
RECORD_HEADER_LEN = 16


class BadMagicError(ValueError):
    pass


class UnsupportedLinkTypeError(ValueError):
    pass


class TruncatedRecordError(ValueError):
    pass


@dataclass(frozen=True)
class RawFrame:
    data: bytes
    ts_sec: int
    ts_usec: int

    @property
    def ts(self) -> float:
        return self.ts_sec + self.ts_usec / 1_000_000


class CaptureReader:
    """Positioned at the first record after `open_capture`; `next_frame`
    walks the records until it returns None at end of stream."""

    def __init__(
        self, stream: BinaryIO, byte_order: str, snaplen: int, link_type: int
    ) -> None:
        self._stream = stream
        self.byte_order = byte_order  # struct prefix, "<" or ">"
        self.snaplen = snaplen
        self.link_type = link_type

    def next_frame(self) -> RawFrame | None:
        header = self._stream.read(RECORD_HEADER_LEN)
        if not header:
            return None
        if len(header) < RECORD_HEADER_LEN:
            raise TruncatedRecordError("record header cut short")
        ts_sec, ts_usec, incl_len, _orig_len = struct.unpack(
            self.byte_order + "IIII", header
        )
        data = self._stream.read(incl_len)
        if len(data) < incl_len:
            raise TruncatedRecordError(
                f"record promises {incl_len} bytes, stream has {len(data)}"
            )
        return RawFrame(data=data, ts_sec=ts_sec, ts_usec=ts_usec)

    def __iter__(self) -> Iterator[RawFrame]:
        while True:
            frame = self.next_frame()
            if frame is None:
                return
            yield frame


def open_capture(stream: BinaryIO) -> CaptureReader:
    """Validate the 24-byte global header and return a positioned reader.

    Both native and byte-swapped magics are accepted; the recorded byte
    order applies to every record header that follows. Only Ethernet
    captures are usable by the decoder, anything else is rejected.
    """
    header = stream.read(GLOBAL_HEADER_LEN)
    if len(header) < GLOBAL_HEADER_LEN:
        raise BadMagicError("stream shorter than a capture global header")
    (magic,) = struct.unpack("<I", header[:4])
    if magic == PCAP_MAGIC:
        byte_order = "<"
    else:
        (magic_be,) = struct.unpack(">I", header[:4])
        if magic_be == PCAP_MAGIC:
            byte_order = ">"
        else:
            raise BadMagicError(f"bad capture magic 0x{magic:08x}")
    _major, _minor, _thiszone, _sigfigs, snaplen, link_type = struct.unpack(
        byte_order + "HHiIII", header[4:]
    )
    if link_type != LINKTYPE_ETHERNET:
        raise UnsupportedLinkTypeError(f"link type {link_type} is not Ethernet")
    return CaptureReader(stream, byte_order, snaplen, link_type)


def read_capture(path: Path | str) -> Iterator[RawFrame]:
    """Open a capture file and yield every frame in record order."""
    with open(path, "rb") as stream:
        reader = open_capture(stream)
        yield from reader
