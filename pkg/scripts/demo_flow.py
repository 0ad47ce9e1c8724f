#!/usr/bin/env python3
"""Scripted end-to-end walkthrough, no privileges or real network needed.

Builds a throwaway home directory with application config fixtures, runs the
daemon behind its API, and drives the whole loop: known network, unknown
network with a submitted profile, then capture replays for the safe-site and
media detectors. Prints the resulting event log.
"""

import json
import tempfile
from pathlib import Path

from netprofiled.api import ApiServer
from netprofiled.cli import ApiClient
from netprofiled.daemon import Daemon
from netprofiled.fixtures import build_tcp_frame, http_payload, write_pcap
from netprofiled.modifiers import RecordingLauncher
from netprofiled.profiles import NetworkProfile
from netprofiled.repo import LruCache, ProfileRepository
from netprofiled.service import DaemonService

OFFICE = "192.168.1.7_192.168.1.1"
CAFE = "10.0.0.5_nodns"
LOCAL_MAC = "66:77:88:99:aa:bb"
REMOTE_MAC = "00:11:22:33:44:55"

PROFILES_INI = "[Profile0]\nName=default\nIsRelative=1\nPath=demo.default\n"
PREFS_JS = '// Mozilla User Preferences\nuser_pref("browser.startup.homepage", "about:blank");\n'


def make_home(root: Path) -> None:
    firefox = root / ".mozilla" / "firefox"
    (firefox / "demo.default").mkdir(parents=True)
    (firefox / "profiles.ini").write_text(PROFILES_INI)
    (firefox / "demo.default" / "prefs.js").write_text(PREFS_JS)


def make_captures(root: Path) -> tuple[Path, Path]:
    ack = 0xA0B0
    connect = build_tcp_frame(
        src_mac=LOCAL_MAC, dst_mac=REMOTE_MAC,
        src_ip="192.168.1.7", dst_ip="93.184.216.34",
        src_port=51000, dst_port=8080, seq=0x1000, ack=ack,
        payload=http_payload("CONNECT example.com:443 HTTP/1.1"),
    )
    established = build_tcp_frame(
        src_mac=REMOTE_MAC, dst_mac=LOCAL_MAC,
        src_ip="93.184.216.34", dst_ip="192.168.1.7",
        src_port=8080, dst_port=51000, seq=ack, ack=0x1020,
        payload=http_payload("HTTP/1.1 200 Connection established"),
    )
    media = build_tcp_frame(
        src_mac=REMOTE_MAC, dst_mac=LOCAL_MAC,
        src_ip="93.184.216.34", dst_ip="192.168.1.7",
        src_port=80, dst_port=50123, seq=0x2000, ack=0x3000,
        payload=http_payload(
            "HTTP/1.1 200 OK", "Content-Type: video/mp4", "Content-Length: 1048576"
        ),
    )
    safe = write_pcap(root / "safe_site.pcap", [(connect, 0, 0), (established, 0, 1000)])
    stream = write_pcap(root / "media.pcap", [(media, 1, 0)])
    return safe, stream


def main() -> int:
    with tempfile.TemporaryDirectory(prefix="netprofiled-demo-") as tmp:
        home = Path(tmp)
        make_home(home)
        safe_pcap, media_pcap = make_captures(home)

        repo = ProfileRepository.under_home(home)
        repo.store(
            OFFICE,
            NetworkProfile(
                display_name="Office",
                homepage_url="http://www.office.com",
                email_command="thunderbird",
            ),
        )
        daemon = Daemon(
            repo, LruCache(8), sandbox_root=home, launcher=RecordingLauncher()
        )
        service = DaemonService(daemon)
        service.start()
        server = ApiServer(service, port=0)
        server.start()
        client = ApiClient(server.address)
        print(f"daemon up at {server.address}\n")

        print("-> connect to the office network (profile on file)")
        client.request("POST", "/apply", {"network_id": OFFICE})
        print(json.dumps(client.get("/status"), indent=2))

        print("\n-> roam to an unknown network; the daemon asks for a profile")
        client.request("POST", "/apply", {"network_id": CAFE})
        print(json.dumps(client.get("/status"), indent=2))

        print("\n-> submit the cafe profile")
        client.request(
            "POST",
            f"/pending/{CAFE}/profile",
            NetworkProfile(display_name="Cafe", homepage_url="http://cafe.example").to_dict(),
        )
        print(json.dumps(client.get("/status"), indent=2))

        print("\n-> replay a CONNECT tunnel capture (safe-site detector)")
        doc = client.request(
            "POST", "/replay", {"capture": str(safe_pcap), "local_mac": LOCAL_MAC}
        )
        print(json.dumps(doc["events"], indent=2))

        print("\n-> replay a video stream capture (media detector, not home)")
        doc = client.request(
            "POST", "/replay", {"capture": str(media_pcap), "local_mac": LOCAL_MAC}
        )
        print(json.dumps(doc["events"], indent=2))

        print("\nfull event log:")
        for event in client.get("/events")["events"]:
            print(f"  [{event['seq']}] {event['kind']}")

        homepage = (
            home / ".mozilla" / "firefox" / "demo.default" / "prefs.js"
        ).read_text()
        print("\nprefs.js homepage line now:")
        for line in homepage.splitlines():
            if "homepage" in line:
                print(f"  {line}")

        server.stop()
        service.stop()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
