import struct

import pytest
from hypothesis import given, strategies as st

from netprofiled.frames import (
    Direction,
    NotIPv4Error,
    TruncatedFrameError,
    classify_direction,
    decode_frame,
    format_mac,
    parse_mac,
)

LOCAL = parse_mac("66:77:88:99:aa:bb")
REMOTE = parse_mac("00:11:22:33:44:55")


def build_frame_by_hand(
    *,
    ihl: int = 5,
    data_offset: int = 5,
    payload: bytes = b"",
    proto: int = 6,
    src_port: int = 51000,
    dst_port: int = 443,
    seq: int = 0x00001000,
    ack: int = 0x0000A0B0,
    ethertype: int = 0x0800,
    version: int = 4,
):
    """Independent frame constructor: explicit concatenation at documented
    offsets, no shared code with the decoder or the fixtures builder."""
    eth = REMOTE + LOCAL + struct.pack(">H", ethertype)  # dst, src, type
    ip_options = bytes(range(1, (ihl - 5) * 4 + 1))
    ip = (
        bytes([(version << 4) | ihl, 0])
        + struct.pack(">H", ihl * 4 + data_offset * 4 + len(payload))
        + struct.pack(">HH", 1, 0)
        + bytes([64, proto])
        + struct.pack(">H", 0)
        + bytes([192, 168, 1, 7])
        + bytes([93, 184, 216, 34])
        + ip_options
    )
    tcp_options = bytes(range(2, (data_offset - 5) * 4 + 2))
    tcp = (
        struct.pack(">HH", src_port, dst_port)
        + struct.pack(">II", seq, ack)
        + bytes([data_offset << 4, 0x18])
        + struct.pack(">HHH", 0xFFFF, 0, 0)
        + tcp_options
    )
    return eth + ip + tcp + payload


def test_hand_built_66_byte_frame_decodes_exactly():
    payload = b"CONNECT a:4\n"
    assert len(payload) == 12
    frame = build_frame_by_hand(payload=payload)
    assert len(frame) == 66  # 14 eth + 20 ip + 20 tcp + 12 payload
    packet = decode_frame(frame, ts_sec=7, ts_usec=500)
    assert packet.src_mac == LOCAL
    assert packet.dst_mac == REMOTE
    assert packet.ip_proto == 6
    assert packet.is_tcp
    assert packet.src_ip == "192.168.1.7"
    assert packet.dst_ip == "93.184.216.34"
    assert packet.src_port == 51000
    assert packet.dst_port == 443
    assert packet.seq == 0x00001000
    assert packet.ack == 0x0000A0B0
    assert packet.payload_offset == 54
    assert packet.payload_len == 12
    assert packet.payload == payload
    assert packet.ts == 7.0005


def test_udp_frame_decodes_flagged_non_tcp():
    frame = build_frame_by_hand(proto=17, payload=b"dns?")
    packet = decode_frame(frame)
    assert not packet.is_tcp
    assert packet.ip_proto == 17
    assert packet.src_port == 0 and packet.dst_port == 0
    assert packet.seq == 0 and packet.ack == 0


def test_zero_payload_frame():
    packet = decode_frame(build_frame_by_hand(payload=b""))
    assert packet.payload_len == 0
    assert packet.payload == b""


def test_non_ipv4_ethertype_rejected():
    with pytest.raises(NotIPv4Error):
        decode_frame(build_frame_by_hand(ethertype=0x86DD))


def test_non_v4_version_rejected():
    with pytest.raises(NotIPv4Error):
        decode_frame(build_frame_by_hand(version=6))


def test_short_frame_rejected():
    with pytest.raises(TruncatedFrameError):
        decode_frame(b"\x00" * 20)


def test_tcp_header_past_frame_end_rejected():
    # data offset claims 15 words but the frame carries a 5-word header
    frame = bytearray(build_frame_by_hand(payload=b""))
    frame[14 + 20 + 12] = 15 << 4
    with pytest.raises(TruncatedFrameError):
        decode_frame(bytes(frame))


def test_bad_ihl_rejected():
    frame = bytearray(build_frame_by_hand())
    frame[14] = (4 << 4) | 3
    with pytest.raises(TruncatedFrameError):
        decode_frame(bytes(frame))


@given(
    st.integers(5, 15),
    st.integers(5, 15),
    st.binary(max_size=200),
)
def test_payload_length_matches_brute_force_count(ihl, data_offset, payload):
    frame = build_frame_by_hand(ihl=ihl, data_offset=data_offset, payload=payload)
    packet = decode_frame(frame)
    header_end = 14 + ihl * 4 + data_offset * 4
    assert packet.payload_len == len(frame) - header_end == len(payload)
    assert packet.payload == frame[header_end:] == payload


def test_direction_examples():
    outbound = decode_frame(build_frame_by_hand())  # src LOCAL -> dst REMOTE
    assert classify_direction(outbound, LOCAL) is Direction.OUTBOUND
    assert classify_direction(outbound, REMOTE) is Direction.INBOUND
    assert classify_direction(outbound, parse_mac("de:ad:be:ef:00:01")) is Direction.OTHER


_macs = st.binary(min_size=6, max_size=6)


@given(_macs, _macs, _macs)
def test_direction_classification_is_exclusive(src, dst, local):
    frame = bytearray(build_frame_by_hand())
    frame[0:6] = dst
    frame[6:12] = src
    packet = decode_frame(bytes(frame))
    direction = classify_direction(packet, local)
    outcomes = [
        direction is Direction.OUTBOUND,
        direction is Direction.INBOUND,
        direction is Direction.OTHER,
    ]
    assert sum(outcomes) == 1
    if src == local:
        assert direction is Direction.OUTBOUND
    elif dst == local:
        assert direction is Direction.INBOUND
    else:
        assert direction is Direction.OTHER


def test_mac_text_round_trip():
    assert format_mac(parse_mac("66:77:88:99:AA:BB")) == "66:77:88:99:aa:bb"
    with pytest.raises(ValueError):
        parse_mac("66:77:88")
    with pytest.raises(ValueError):
        parse_mac("zz:77:88:99:aa:bb")
