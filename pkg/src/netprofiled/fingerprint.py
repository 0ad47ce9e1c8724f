"""Network identity: parse interface/resolver reports, derive a stable id.

Parsers consume captured tool output, so nothing here shells out. The live
adapter in `service` feeds real `ifconfig` text through the same functions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

__all__ = [
    "LinkKind",
    "InterfaceSnapshot",
    "DnsConfig",
    "MalformedReportError",
    "NoAddressError",
    "parse_interface_report",
    "parse_resolver_config",
    "derive_network_id",
    "first_active_snapshot",
    "is_dotted_quad",
]

NO_DNS_SUFFIX = "nodns"


class LinkKind(Enum):
    ETHERNET = "ethernet"
    POINT_TO_POINT = "point-to-point"
    WIRELESS = "wireless"


class MalformedReportError(ValueError):
    """An interface-report block that cannot be parsed; carries the line number."""

    def __init__(self, message: str, line: int) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


class NoAddressError(ValueError):
    """Snapshot has no IPv4 address to derive an identity from."""


@dataclass(frozen=True)
class InterfaceSnapshot:
    name: str
    link: LinkKind
    ipv4: str | None = None
    hw_addr: str | None = None
    up: bool = False


@dataclass(frozen=True)
class DnsConfig:
    nameservers: tuple[str, ...] = ()


_LINK_KIND_BY_ENCAP = {
    "Ethernet": LinkKind.ETHERNET,
    "Wireless": LinkKind.WIRELESS,
    "IEEE 802.11": LinkKind.WIRELESS,
    "Point-to-Point Protocol": LinkKind.POINT_TO_POINT,
    "Point-to-Point": LinkKind.POINT_TO_POINT,
}
_LOOPBACK_ENCAPS = {"Local Loopback"}

# Encap values may contain single spaces ("Point-to-Point Protocol"); the
# classic report separates fields with runs of two or more spaces.
_ENCAP_RE = re.compile(r"Link encap:\s*(.+?)(?:\s{2,}|$)")
_INET_RE = re.compile(r"inet addr:\s*(\S+)")
_HWADDR_RE = re.compile(r"HWaddr\s+(\S+)")
_IPV4_RE = re.compile(r"^\d{1,3}\.\d{1,3}\.\d{1,3}\.\d{1,3}$")
_MAC_RE = re.compile(r"^[0-9A-Fa-f]{2}(:[0-9A-Fa-f]{2}){5}$")


def is_dotted_quad(text: str) -> bool:
    if not _IPV4_RE.match(text):
        return False
    return all(int(part) <= 255 for part in text.split("."))


def parse_interface_report(report: str) -> list[InterfaceSnapshot]:
    """Parse an ifconfig-style report into snapshots, loopback excluded.

    Raises MalformedReportError for blocks that break the grammar.
    """
    snapshots = []
    for block in _blocks(report):
        snapshot = _parse_block(block)
        if snapshot is not None:
            snapshots.append(snapshot)
    return snapshots


def _blocks(report: str):
    """Yield blocks as lists of (line_number, line), split on blank lines."""
    block: list[tuple[int, str]] = []
    for number, line in enumerate(report.splitlines(), start=1):
        if line.strip():
            block.append((number, line))
        elif block:
            yield block
            block = []
    if block:
        yield block


def _parse_block(block: list[tuple[int, str]]) -> InterfaceSnapshot | None:
    start_line = block[0][0]
    name = block[0][1].split()[0]
    encap: str | None = None
    encap_line = start_line
    ipv4: str | None = None
    hw_addr: str | None = None
    up = False

    for number, line in block:
        match = _ENCAP_RE.search(line)
        if match and encap is None:
            encap = match.group(1).strip()
            encap_line = number
        match = _INET_RE.search(line)
        if match:
            if not is_dotted_quad(match.group(1)):
                raise MalformedReportError(
                    f"bad IPv4 address {match.group(1)!r}", number
                )
            ipv4 = match.group(1)
        match = _HWADDR_RE.search(line)
        if match:
            if not _MAC_RE.match(match.group(1)):
                raise MalformedReportError(
                    f"bad hardware address {match.group(1)!r}", number
                )
            hw_addr = match.group(1).lower()
        if "UP" in line.split():
            up = True

    if encap is None:
        raise MalformedReportError(
            f"interface block {name!r} has no link encapsulation", start_line
        )
    if encap in _LOOPBACK_ENCAPS:
        return None
    link = _LINK_KIND_BY_ENCAP.get(encap)
    if link is None:
        raise MalformedReportError(f"unknown link encapsulation {encap!r}", encap_line)
    if link is LinkKind.POINT_TO_POINT:
        hw_addr = None
    elif hw_addr is None:
        raise MalformedReportError(
            f"interface block {name!r} has no hardware address", start_line
        )
    return InterfaceSnapshot(name=name, link=link, ipv4=ipv4, hw_addr=hw_addr, up=up)


def parse_resolver_config(text: str) -> DnsConfig:
    """Collect `nameserver <ip>` lines in order; everything else is ignored."""
    servers = []
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        tokens = stripped.split()
        if tokens[0] != "nameserver" or len(tokens) < 2:
            continue
        if is_dotted_quad(tokens[1]):
            servers.append(tokens[1])
    return DnsConfig(nameservers=tuple(servers))


def derive_network_id(snapshot: InterfaceSnapshot, dns: DnsConfig) -> str:
    """Derive the per-network identifier used as the profile file name.

    Point-to-point links are identified by address alone; ethernet and
    wireless links append the first nameserver (or "nodns") so that the same
    private subnet behind different resolvers yields distinct identities.
    """
    if snapshot.ipv4 is None:
        raise NoAddressError(f"interface {snapshot.name!r} has no IPv4 address")
    if snapshot.link is LinkKind.POINT_TO_POINT:
        return snapshot.ipv4
    first = dns.nameservers[0] if dns.nameservers else NO_DNS_SUFFIX
    return f"{snapshot.ipv4}_{first}"


def first_active_snapshot(
    snapshots: list[InterfaceSnapshot],
) -> InterfaceSnapshot | None:
    """First UP interface that has an address; ties between several UP
    interfaces are broken by report order."""
    for snapshot in snapshots:
        if snapshot.up and snapshot.ipv4 is not None:
            return snapshot
    return None
