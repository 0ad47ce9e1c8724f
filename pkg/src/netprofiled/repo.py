"""On-disk profile repository (one file per network) with an LRU cache."""

from __future__ import annotations

import logging
import os
import tempfile
from collections import OrderedDict
from pathlib import Path

from .profiles import NetworkProfile, decode_profile, encode_profile

__all__ = [
    "REPOSITORY_DIRNAME",
    "InvalidNetworkIdError",
    "validate_network_id",
    "ProfileRepository",
    "LruCache",
    "lookup_with_cache",
]

log = logging.getLogger(__name__)

REPOSITORY_DIRNAME = ".networkdaemon"
DEFAULT_CACHE_CAPACITY = 8

_FORBIDDEN = set('/\\<>:"|?*')


class InvalidNetworkIdError(ValueError):
    pass


def validate_network_id(network_id: str) -> str:
    """Reject ids that cannot be used as a plain file name."""
    if not network_id or network_id in {".", ".."}:
        raise InvalidNetworkIdError(f"invalid network id {network_id!r}")
    if any(c.isspace() or c in _FORBIDDEN for c in network_id):
        raise InvalidNetworkIdError(f"invalid network id {network_id!r}")
    return network_id


class ProfileRepository:
    """Profiles stored as `<base_dir>/<network_id>` under a `.networkdaemon`
    directory; writes are temp-then-rename so readers never see a torn file."""

    def __init__(self, base_dir: Path | str) -> None:
        base_dir = Path(base_dir)
        if base_dir.name != REPOSITORY_DIRNAME:
            raise ValueError(f"repository directory must be named {REPOSITORY_DIRNAME}")
        base_dir.mkdir(parents=True, exist_ok=True)
        self.base_dir = base_dir
        self.reads = 0  # disk reads, observable by cache tests

    @classmethod
    def under_home(cls, home_root: Path | str) -> "ProfileRepository":
        return cls(Path(home_root) / REPOSITORY_DIRNAME)

    def path_for(self, network_id: str) -> Path:
        return self.base_dir / validate_network_id(network_id)

    def store(self, network_id: str, profile: NetworkProfile) -> None:
        target = self.path_for(network_id)
        data = encode_profile(profile).encode("utf-8")
        fd, tmp_name = tempfile.mkstemp(dir=self.base_dir, prefix=".tmp-")
        try:
            with os.fdopen(fd, "wb") as handle:
                handle.write(data)
            os.replace(tmp_name, target)
        except BaseException:
            try:
                os.unlink(tmp_name)
            except OSError:
                pass
            raise

    def load(self, network_id: str) -> NetworkProfile | None:
        """None when the file is absent; ProfileDecodeError when it is
        present but malformed (corruption is surfaced, not hidden)."""
        target = self.path_for(network_id)
        try:
            text = target.read_text(encoding="utf-8")
        except FileNotFoundError:
            return None
        self.reads += 1
        profile, warnings = decode_profile(text)
        for warning in warnings:
            log.warning("profile %s: %s", network_id, warning)
        return profile

    def list_ids(self) -> list[str]:
        return sorted(
            entry.name
            for entry in self.base_dir.iterdir()
            if entry.is_file() and not entry.name.startswith(".")
        )


class LruCache:
    """Fixed-capacity map evicting the least-recently-used entry."""

    def __init__(self, capacity: int) -> None:
        if capacity < 1:
            raise ValueError("capacity must be at least 1")
        self.capacity = capacity
        self._entries: OrderedDict[str, NetworkProfile] = OrderedDict()

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, network_id: str) -> bool:
        return network_id in self._entries

    def get(self, network_id: str) -> NetworkProfile | None:
        if network_id not in self._entries:
            return None
        self._entries.move_to_end(network_id)
        return self._entries[network_id]

    def put(
        self, network_id: str, profile: NetworkProfile
    ) -> tuple[str, NetworkProfile] | None:
        """Insert or refresh; returns the evicted (id, profile) if any."""
        if network_id in self._entries:
            self._entries[network_id] = profile
            self._entries.move_to_end(network_id)
            return None
        self._entries[network_id] = profile
        if len(self._entries) > self.capacity:
            return self._entries.popitem(last=False)
        return None


def lookup_with_cache(
    repo: ProfileRepository, cache: LruCache, network_id: str
) -> NetworkProfile | None:
    """Cache first, then repository; a repository hit is cached on the way out."""
    cached = cache.get(network_id)
    if cached is not None:
        return cached
    profile = repo.load(network_id)
    if profile is not None:
        cache.put(network_id, profile)
    return profile
