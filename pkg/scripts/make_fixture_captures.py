#!/usr/bin/env python3
"""Generate demo fixtures: capture files plus report/config files.

Writes into the target directory (default ./fixtures):
  safe_site.pcap   CONNECT + "200 Connection established" exchange
  media.pcap       video/mp4 response plus stream segments on one port
  ifreport.txt     captured interface report (ethernet, UP)
  resolv.conf      one nameserver
  visits.log       visit-log entries for the session resolver

Replay them against a running daemon:
  netprofiled replay fixtures/safe_site.pcap --not-home --local-mac 66:77:88:99:aa:bb
"""

import argparse
from pathlib import Path

from netprofiled.fixtures import build_tcp_frame, http_payload, write_pcap

LOCAL_MAC = "66:77:88:99:aa:bb"
REMOTE_MAC = "00:11:22:33:44:55"
LOCAL_IP = "192.168.1.7"
REMOTE_IP = "93.184.216.34"

IF_REPORT = """\
eth0      Link encap:Ethernet  HWaddr 66:77:88:99:aa:bb
          inet addr:192.168.1.7  Bcast:192.168.1.255  Mask:255.255.255.0
          UP BROADCAST RUNNING MULTICAST  MTU:1500  Metric:1

lo        Link encap:Local Loopback
          inet addr:127.0.0.1  Mask:255.0.0.0
          UP LOOPBACK RUNNING  MTU:16436  Metric:1
"""


def safe_site_frames():
    ack = 0x0000A0B0
    request = build_tcp_frame(
        src_mac=LOCAL_MAC,
        dst_mac=REMOTE_MAC,
        src_ip=LOCAL_IP,
        dst_ip=REMOTE_IP,
        src_port=51000,
        dst_port=8080,
        seq=0x1000,
        ack=ack,
        payload=http_payload("CONNECT example.com:443 HTTP/1.1", "Host: example.com:443"),
    )
    response = build_tcp_frame(
        src_mac=REMOTE_MAC,
        dst_mac=LOCAL_MAC,
        src_ip=REMOTE_IP,
        dst_ip=LOCAL_IP,
        src_port=8080,
        dst_port=51000,
        seq=ack,
        ack=0x1020,
        payload=http_payload("HTTP/1.1 200 Connection established"),
    )
    return [(request, 100, 0), (response, 100, 250_000)]


def media_frames():
    head = build_tcp_frame(
        src_mac=REMOTE_MAC,
        dst_mac=LOCAL_MAC,
        src_ip=REMOTE_IP,
        dst_ip=LOCAL_IP,
        src_port=80,
        dst_port=50123,
        seq=0x2000,
        ack=0x3000,
        payload=http_payload(
            "HTTP/1.1 200 OK",
            "Content-Type: video/mp4",
            "Content-Length: 1048576",
        ),
    )
    frames = [(head, 200, 0)]
    for index in range(50):
        segment = build_tcp_frame(
            src_mac=REMOTE_MAC,
            dst_mac=LOCAL_MAC,
            src_ip=REMOTE_IP,
            dst_ip=LOCAL_IP,
            src_port=80,
            dst_port=50123,
            seq=0x2100 + index * 100,
            ack=0x3000,
            payload=bytes(100),
        )
        frames.append((segment, 200, (index + 1) * 10_000))
    return frames


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "target", nargs="?", type=Path, default=Path("fixtures"), help="output directory"
    )
    args = parser.parse_args()
    args.target.mkdir(parents=True, exist_ok=True)

    write_pcap(args.target / "safe_site.pcap", safe_site_frames())
    write_pcap(args.target / "media.pcap", media_frames())
    (args.target / "ifreport.txt").write_text(IF_REPORT)
    (args.target / "resolv.conf").write_text("nameserver 192.168.1.1\n")
    (args.target / "visits.log").write_text("example.com\t90\t7\n")
    for name in sorted(p.name for p in args.target.iterdir()):
        print(f"wrote {args.target / name}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
