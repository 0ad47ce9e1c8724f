import io
import struct

import pytest

from netprofiled.capture import (
    BadMagicError,
    TruncatedRecordError,
    UnsupportedLinkTypeError,
    open_capture,
    read_capture,
)
from netprofiled.fixtures import build_pcap, write_pcap

FRAMES = [
    (b"\xaa" * 60, 100, 1),
    (b"\xbb" * 72, 100, 500_000),
]


def test_native_order_capture_reads_all_frames():
    reader = open_capture(io.BytesIO(build_pcap(FRAMES)))
    assert reader.byte_order == "<"
    first = reader.next_frame()
    second = reader.next_frame()
    assert (first.data, first.ts_sec, first.ts_usec) == FRAMES[0]
    assert (second.data, second.ts_sec, second.ts_usec) == FRAMES[1]
    assert reader.next_frame() is None


def test_swapped_order_produces_identical_frames():
    native = list(open_capture(io.BytesIO(build_pcap(FRAMES))))
    swapped = list(open_capture(io.BytesIO(build_pcap(FRAMES, swapped=True))))
    assert native == swapped


def test_bad_magic_rejected():
    data = struct.pack("<IHHiIII", 0x00000000, 2, 4, 0, 0, 65535, 1)
    with pytest.raises(BadMagicError):
        open_capture(io.BytesIO(data))


def test_nanosecond_magic_rejected():
    data = struct.pack("<IHHiIII", 0xA1B23C4D, 2, 4, 0, 0, 65535, 1)
    with pytest.raises(BadMagicError):
        open_capture(io.BytesIO(data))


def test_short_global_header_rejected():
    with pytest.raises(BadMagicError):
        open_capture(io.BytesIO(b"\xd4\xc3\xb2\xa1\x02\x00"))


def test_non_ethernet_link_type_rejected():
    data = struct.pack("<IHHiIII", 0xA1B2C3D4, 2, 4, 0, 0, 65535, 101)
    with pytest.raises(UnsupportedLinkTypeError):
        open_capture(io.BytesIO(data))


def test_empty_capture_yields_immediately():
    reader = open_capture(io.BytesIO(build_pcap([])))
    assert reader.next_frame() is None


def test_truncated_record_body():
    data = build_pcap([(b"\xcc" * 40, 0, 0)])[:-10]
    reader = open_capture(io.BytesIO(data))
    with pytest.raises(TruncatedRecordError):
        reader.next_frame()


def test_truncated_record_header():
    data = build_pcap([]) + b"\x00" * 7
    reader = open_capture(io.BytesIO(data))
    with pytest.raises(TruncatedRecordError):
        reader.next_frame()


def test_replay_determinism_from_file(tmp_path):
    path = write_pcap(tmp_path / "frames.pcap", FRAMES)
    first = list(read_capture(path))
    second = list(read_capture(path))
    assert first == second
    assert [frame.data for frame in first] == [data for data, _, _ in FRAMES]


def test_frame_timestamp_property():
    reader = open_capture(io.BytesIO(build_pcap([(b"\x00" * 20, 3, 250_000)])))
    assert reader.next_frame().ts == 3.25
