"""Acceptance suite: one test per release criterion, exact tolerances.

Each test prints a PASS line so a -s run reads as a checklist. Everything
here runs unprivileged and at desk scale.
"""

import random
import struct

from hypothesis import given, settings

from helpers import (
    ACCOUNTS_XML,
    FakeClock,
    LOCAL_MAC,
    MIMEAPPS_LIST,
    PREFS_JS,
    RecencyListOracle,
    connect_request_frame,
    connect_response_frame,
    media_data_frame,
    media_head_frame,
    profile_strategy,
    write_accounts_fixture,
    write_firefox_fixture,
    write_mimeapps_fixture,
)
from netprofiled.daemon import Daemon, EventKind
from netprofiled.fixtures import write_pcap
from netprofiled.frames import decode_frame
from netprofiled.modifiers import (
    RecordingLauncher,
    browser_homepage_apply,
    default_media_apply,
    email_apply,
    messenger_apply,
)
from netprofiled.profiles import NetworkProfile, decode_profile, encode_profile
from netprofiled.repo import LruCache, ProfileRepository

A = "192.168.1.7_192.168.1.1"
B = "10.0.0.5_nodns"
K = 0x0000A0B0


# --- criterion: decoder correctness ------------------------------------------


def test_decoder_200_randomized_frames_match_brute_force():
    rng = random.Random(42)
    for _ in range(200):
        ihl = rng.randint(5, 15)
        data_offset = rng.randint(5, 15)
        payload = bytes(rng.randrange(256) for _ in range(rng.randint(0, 300)))
        # Independent construction: raw struct packing at documented offsets.
        eth = bytes(rng.randrange(256) for _ in range(12)) + b"\x08\x00"
        ip = (
            bytes([(4 << 4) | ihl])
            + b"\x00"
            + struct.pack(">H", ihl * 4 + data_offset * 4 + len(payload))
            + b"\x00\x01\x00\x00\x40\x06\x00\x00"
            + bytes(rng.randrange(256) for _ in range(8))  # src/dst addresses
            + bytes(rng.randrange(256) for _ in range((ihl - 5) * 4))
        )
        tcp = (
            struct.pack(
                ">HHII",
                rng.randrange(65536),
                rng.randrange(65536),
                rng.randrange(2**32),
                rng.randrange(2**32),
            )
            + bytes([data_offset << 4, 0x18])
            + b"\xff\xff\x00\x00\x00\x00"
            + bytes(rng.randrange(256) for _ in range((data_offset - 5) * 4))
        )
        frame = eth + ip + tcp + payload
        packet = decode_frame(frame)
        brute_force = len(frame) - 14 - ihl * 4 - data_offset * 4
        assert packet.payload_len == brute_force == len(payload)
        assert packet.payload == payload
    print("ACCEPTANCE decoder randomized payload arithmetic: PASS")


def test_decoder_hand_built_66_byte_connect_frame():
    frame = bytes.fromhex(
        "001122334455"  # dst MAC
        "66778899aabb"  # src MAC
        "0800"  # IPv4 ethertype
        "450000340001000040060000"  # IP: v4 IHL=5, len 52, TTL 64, TCP
        "c0a80107"  # 192.168.1.7
        "5db8d822"  # 93.184.216.34
        "c73801bb"  # ports 51000 -> 443
        "00001000"  # seq
        "0000a0b0"  # ack
        "5018ffff00000000"  # data offset 5, PSH|ACK
        "434f4e4e45435420613a340a"  # 12-byte payload "CONNECT a:4\n"
    )
    assert len(frame) == 66
    packet = decode_frame(frame)
    assert packet.src_mac.hex(":") == "66:77:88:99:aa:bb"
    assert packet.dst_mac.hex(":") == "00:11:22:33:44:55"
    assert packet.ip_proto == 6
    assert packet.src_ip == "192.168.1.7"
    assert packet.dst_ip == "93.184.216.34"
    assert packet.src_port == 51000
    assert packet.dst_port == 443
    assert packet.seq == 0x00001000
    assert packet.ack == 0x0000A0B0
    assert packet.payload_len == 12
    assert packet.payload == b"CONNECT a:4\n"
    print("ACCEPTANCE decoder hand-built frame: PASS")


# --- criterion: safe-site detection -----------------------------------------


def fresh_daemon(tmp_path, name="env"):
    home = tmp_path / name
    home.mkdir(exist_ok=True)
    return Daemon(
        ProfileRepository.under_home(home),
        LruCache(8),
        sandbox_root=home,
        launcher=RecordingLauncher(),
        clock=FakeClock(),
    )


def safe_site_events(daemon, path):
    return [
        event
        for event in daemon.replay_capture(path, is_home=False, local_mac=LOCAL_MAC)
        if event.kind is EventKind.SAFE_SITE
    ]


def test_safe_site_detection_counts(tmp_path):
    single = write_pcap(
        tmp_path / "single.pcap",
        [
            (connect_request_frame(ack=K), 0, 0),
            (connect_response_frame(seq=K), 0, 500_000),
        ],
    )
    assert len(safe_site_events(fresh_daemon(tmp_path, "single"), single)) == 1

    shuffled = write_pcap(
        tmp_path / "shuffled.pcap",
        [
            (connect_request_frame(ack=K), 0, 0),
            (connect_request_frame(ack=K + 1, src_port=51001), 0, 100_000),
            (connect_response_frame(seq=K + 7), 0, 500_000),
            (connect_response_frame(seq=K + 8), 0, 600_000),
        ],
    )
    assert len(safe_site_events(fresh_daemon(tmp_path, "shuffled"), shuffled)) == 0

    repeated = write_pcap(
        tmp_path / "repeated.pcap",
        [
            (connect_request_frame(ack=K), 0, 0),
            (connect_response_frame(seq=K), 0, 500_000),
            (connect_request_frame(ack=K + 1), 1, 0),
            (connect_response_frame(seq=K + 1), 1, 500_000),
        ],
    )
    assert len(safe_site_events(fresh_daemon(tmp_path, "repeated"), repeated)) == 1

    new_session = write_pcap(
        tmp_path / "newsession.pcap",
        [
            (connect_request_frame(ack=K), 0, 0),
            (connect_response_frame(seq=K), 0, 500_000),
            (connect_request_frame(ack=K + 1), 1, 0),
            (connect_response_frame(seq=K + 1), 1, 500_000),
            (connect_request_frame(ack=K + 2), 100, 0),
            (connect_response_frame(seq=K + 2), 100, 500_000),
        ],
    )
    assert len(safe_site_events(fresh_daemon(tmp_path, "newsession"), new_session)) == 2
    print("ACCEPTANCE safe-site detection counts: PASS")


# --- criterion: media detection ------------------------------------------------


def media_capture(tmp_path, name, status_line="HTTP/1.1 200 OK"):
    frames = [(media_head_frame(dst_port=50123, status_line=status_line), 10, 0)]
    for index in range(50):
        if index == 25:
            # a second head on the same port mid-stream must not re-notify
            frames.append(
                (media_head_frame(dst_port=50123, status_line=status_line), 10, 26)
            )
        else:
            frames.append(
                (media_data_frame(dst_port=50123, seq=5000 + index), 10, index + 1)
            )
    return write_pcap(tmp_path / name, frames)


def media_events(daemon, path, is_home):
    return [
        event
        for event in daemon.replay_capture(path, is_home=is_home, local_mac=LOCAL_MAC)
        if event.kind is EventKind.MEDIA_STREAM
    ]


def test_media_detection_counts(tmp_path):
    streaming = media_capture(tmp_path, "stream.pcap")
    events = media_events(fresh_daemon(tmp_path, "away"), streaming, is_home=False)
    assert len(events) == 1
    assert events[0].payload["dst_port"] == 50123
    assert events[0].payload["content_type"] == "video/mp4"

    no_content = media_capture(
        tmp_path, "nocontent.pcap", status_line="HTTP/1.1 204 No Content"
    )
    assert media_events(fresh_daemon(tmp_path, "nc"), no_content, is_home=False) == []

    assert media_events(fresh_daemon(tmp_path, "home"), streaming, is_home=True) == []
    print("ACCEPTANCE media detection counts: PASS")


# --- criterion: LRU cache vs oracle ---------------------------------------------


def test_lru_thousand_ops_against_oracle():
    rng = random.Random(99)
    cache = LruCache(4)
    oracle = RecencyListOracle(4)
    keys = [f"net-{i}" for i in range(10)]
    for step in range(1000):
        key = rng.choice(keys)
        if rng.random() < 0.5:
            assert cache.get(key) == oracle.get(key), f"get diverged at op {step}"
        else:
            value = NetworkProfile(display_name=f"{key}@{step}")
            assert cache.put(key, value) == oracle.put(key, value), (
                f"put diverged at op {step}"
            )
        assert len(cache) == len(oracle.items) <= 4
    print("ACCEPTANCE LRU cache oracle equivalence: PASS")


# --- criterion: daemon state machine ----------------------------------------------


def scripted_run(home):
    home.mkdir()
    write_firefox_fixture(home)
    repo = ProfileRepository.under_home(home)
    repo.store(
        A,
        NetworkProfile(
            display_name="Office",
            homepage_url="http://www.office.com",
            email_command="thunderbird",
        ),
    )
    daemon = Daemon(
        repo,
        LruCache(8),
        sandbox_root=home,
        launcher=RecordingLauncher(),
        clock=FakeClock(),
    )
    daemon.tick(A)
    daemon.tick(A)
    daemon.tick(B)
    daemon.submit_pending_profile(
        B, NetworkProfile(display_name="Cafe", homepage_url="http://cafe.example")
    )
    daemon.tick(A)
    return daemon


def test_daemon_trace_event_log_deterministic(tmp_path):
    first = scripted_run(tmp_path / "run1")
    second = scripted_run(tmp_path / "run2")
    events = first.events.since(0)
    assert [event.kind for event in events] == [
        EventKind.PROFILE_APPLIED,
        EventKind.UNKNOWN_NETWORK,
        EventKind.PROFILE_APPLIED,
        EventKind.PROFILE_APPLIED,
    ]
    assert [event.payload["network_id"] for event in events] == [A, B, B, A]
    assert first.events.to_json() == second.events.to_json()
    print("ACCEPTANCE daemon scripted trace determinism: PASS")


# --- criterion: modifier idempotence and locality ------------------------------------


def changed_lines(before: str, after: str):
    before_lines = before.split("\n")
    after_lines = after.split("\n")
    assert len(before_lines) == len(after_lines)
    return [
        index
        for index, (a, b) in enumerate(zip(before_lines, after_lines))
        if a != b
    ]


def test_modifier_idempotence_and_locality(tmp_path):
    url = "http://www.office.com"
    prefs = write_firefox_fixture(tmp_path)
    assert browser_homepage_apply(url, tmp_path).changed
    after_browser = prefs.read_text()
    assert changed_lines(PREFS_JS, after_browser) == [2]
    assert not browser_homepage_apply(url, tmp_path).changed
    assert prefs.read_text() == after_browser

    mimeapps = write_mimeapps_fixture(tmp_path)
    assert default_media_apply({"video/mp4": "totem"}, tmp_path).changed
    after_media = mimeapps.read_text()
    assert changed_lines(MIMEAPPS_LIST, after_media) == [1]
    assert not default_media_apply({"video/mp4": "totem"}, tmp_path).changed
    assert mimeapps.read_text() == after_media

    accounts = write_accounts_fixture(tmp_path)
    target = "someaccountname@chat.facebook.com/"
    assert messenger_apply(target, tmp_path).changed
    after_messenger = accounts.read_text()
    for index in changed_lines(ACCOUNTS_XML, after_messenger):
        line = after_messenger.split("\n")[index]
        assert "Available" in line or "auto-login" in line
    assert not messenger_apply(target, tmp_path).changed
    assert accounts.read_text() == after_messenger

    launcher = RecordingLauncher()
    first = email_apply("thunderbird", launcher)
    second = email_apply("thunderbird", launcher)
    assert first.launched == second.launched == "thunderbird"
    assert not first.changed and not second.changed
    print("ACCEPTANCE modifier idempotence and locality: PASS")


# --- criterion: profile round-trip ------------------------------------------------


@settings(max_examples=100)
@given(profile_strategy)
def test_profile_round_trip_100_generated(profile):
    decoded, warnings = decode_profile(encode_profile(profile))
    assert decoded == profile
    assert warnings == []


def test_profile_round_trip_banner():
    print("ACCEPTANCE profile round-trip: PASS")
