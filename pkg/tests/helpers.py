"""Shared test fixtures: sandbox file trees, capture scenarios, strategies."""

from __future__ import annotations

import itertools
from pathlib import Path

from hypothesis import strategies as st

from netprofiled.fixtures import build_tcp_frame, http_payload
from netprofiled.profiles import NetworkProfile

LOCAL_MAC = "66:77:88:99:aa:bb"
REMOTE_MAC = "00:11:22:33:44:55"
OTHER_MAC = "de:ad:be:ef:00:01"
LOCAL_IP = "192.168.1.7"
REMOTE_IP = "93.184.216.34"


class FakeClock:
    """Deterministic clock: returns 0.0, 1.0, 2.0, ... on successive calls."""

    def __init__(self) -> None:
        self._counter = itertools.count()

    def __call__(self) -> float:
        return float(next(self._counter))


# --- sandbox file trees -------------------------------------------------

PROFILES_INI = """\
[General]
StartWithLastProfile=1

[Profile0]
Name=default
IsRelative=1
Path=x1y2z3.default
Default=1
"""

PREFS_JS = """\
// Mozilla User Preferences
user_pref("app.update.auto", true);
user_pref("browser.startup.homepage", "http://www.example.org");
user_pref("browser.tabs.warnOnClose", false);
"""

MIMEAPPS_LIST = """\
[Default Applications]
video/mp4=vlc.desktop
audio/mpeg=rhythmbox.desktop

[Added Associations]
video/mp4=vlc.desktop;totem.desktop;
"""

# Canonical serializer form: double-quoted attributes, `<tag />` empties.
ACCOUNTS_XML = """\
<?xml version='1.0' encoding='UTF-8' standalone='yes'?>
<account version="1.0">
\t<account>
\t\t<protocol>prpl-jabber</protocol>
\t\t<name>someaccountname@chat.facebook.com/</name>
\t\t<password>secret</password>
\t\t<statuses>
\t\t\t<status type="available" name="Available" active="false">
\t\t\t\t<attributes />
\t\t\t</status>
\t\t\t<status type="away" name="Away" active="false">
\t\t\t\t<attributes />
\t\t\t</status>
\t\t</statuses>
\t\t<settings ui="gtk-gaim">
\t\t\t<setting name="auto-login" type="bool">0</setting>
\t\t</settings>
\t</account>
\t<account>
\t\t<protocol>prpl-jabber</protocol>
\t\t<name>other@gmail.com/</name>
\t\t<statuses>
\t\t\t<status type="available" name="Available" active="true">
\t\t\t\t<attributes />
\t\t\t</status>
\t\t</statuses>
\t\t<settings ui="gtk-gaim">
\t\t\t<setting name="auto-login" type="bool">1</setting>
\t\t</settings>
\t</account>
</account>
"""


def write_firefox_fixture(root: Path, prefs: str = PREFS_JS) -> Path:
    firefox = root / ".mozilla" / "firefox"
    profile_dir = firefox / "x1y2z3.default"
    profile_dir.mkdir(parents=True, exist_ok=True)
    (firefox / "profiles.ini").write_text(PROFILES_INI)
    prefs_path = profile_dir / "prefs.js"
    prefs_path.write_text(prefs)
    return prefs_path


def write_mimeapps_fixture(root: Path, content: str = MIMEAPPS_LIST) -> Path:
    path = root / ".local" / "share" / "applications" / "mimeapps.list"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(content)
    return path


def write_accounts_fixture(root: Path, content: str = ACCOUNTS_XML) -> Path:
    path = root / ".purple" / "accounts.xml"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(content)
    return path


# --- capture scenarios ---------------------------------------------------


def connect_request_frame(
    host: str = "example.com:443",
    *,
    ack: int = 0x0000A0B0,
    seq: int = 0x00001000,
    dst_port: int = 8080,
    src_port: int = 51000,
):
    payload = http_payload(f"CONNECT {host} HTTP/1.1", f"Host: {host}")
    return build_tcp_frame(
        src_mac=LOCAL_MAC,
        dst_mac=REMOTE_MAC,
        src_ip=LOCAL_IP,
        dst_ip=REMOTE_IP,
        src_port=src_port,
        dst_port=dst_port,
        seq=seq,
        ack=ack,
        payload=payload,
    )


def connect_response_frame(
    *,
    seq: int = 0x0000A0B0,
    ack: int = 0x00001020,
    src_port: int = 8080,
    dst_port: int = 51000,
    status_line: str = "HTTP/1.1 200 Connection established",
):
    payload = http_payload(status_line)
    return build_tcp_frame(
        src_mac=REMOTE_MAC,
        dst_mac=LOCAL_MAC,
        src_ip=REMOTE_IP,
        dst_ip=LOCAL_IP,
        src_port=src_port,
        dst_port=dst_port,
        seq=seq,
        ack=ack,
        payload=payload,
    )


def media_head_frame(
    *,
    dst_port: int = 50123,
    content_type: str = "video/mp4",
    content_length: int = 1048576,
    status_line: str = "HTTP/1.1 200 OK",
    seq: int = 0x00002000,
):
    payload = http_payload(
        status_line,
        f"Content-Type: {content_type}",
        f"Content-Length: {content_length}",
    )
    return build_tcp_frame(
        src_mac=REMOTE_MAC,
        dst_mac=LOCAL_MAC,
        src_ip=REMOTE_IP,
        dst_ip=LOCAL_IP,
        src_port=80,
        dst_port=dst_port,
        seq=seq,
        ack=0x00003000,
        payload=payload,
    )


def media_data_frame(*, dst_port: int = 50123, seq: int = 0):
    return build_tcp_frame(
        src_mac=REMOTE_MAC,
        dst_mac=LOCAL_MAC,
        src_ip=REMOTE_IP,
        dst_ip=LOCAL_IP,
        src_port=80,
        dst_port=dst_port,
        seq=seq,
        ack=0x00003000,
        payload=b"\x17\x03" + bytes(98),  # opaque stream bytes
    )


# --- hypothesis strategies -----------------------------------------------

_line_text = st.text(
    alphabet=st.characters(blacklist_characters="\n", blacklist_categories=("Cs",)),
    max_size=30,
)
_mime_part = st.text(
    alphabet="abcdefghijklmnopqrstuvwxyz0123456789.+-", min_size=1, max_size=12
)
_mime_key = st.builds(lambda a, b: f"{a}/{b}", _mime_part, _mime_part)
_app_id = st.text(
    alphabet=st.characters(blacklist_characters="\n", blacklist_categories=("Cs",)),
    min_size=1,
    max_size=20,
)

profile_strategy = st.builds(
    NetworkProfile,
    display_name=_line_text,
    homepage_url=_line_text,
    default_media=st.dictionaries(_mime_key, _app_id, max_size=4),
    messenger_account=_line_text,
    email_command=_line_text,
    is_home=st.booleans(),
)

ipv4_strategy = st.builds(
    lambda a, b, c, d: f"{a}.{b}.{c}.{d}",
    *[st.integers(0, 255) for _ in range(4)],
)


class RecencyListOracle:
    """Brute-force LRU model: a list ordered most-recent-first."""

    def __init__(self, capacity: int) -> None:
        self.capacity = capacity
        self.items: list[tuple] = []

    def get(self, key):
        for index, (candidate, value) in enumerate(self.items):
            if candidate == key:
                self.items.insert(0, self.items.pop(index))
                return value
        return None

    def put(self, key, value):
        for index, (candidate, _) in enumerate(self.items):
            if candidate == key:
                self.items.pop(index)
                break
        self.items.insert(0, (key, value))
        if len(self.items) > self.capacity:
            return self.items.pop()
        return None
