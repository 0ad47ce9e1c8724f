"""Daemon configuration: `key=value` file parsed into a dataclass."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

from .detectors import (
    DEFAULT_MEDIA_SUBTYPES,
    DEFAULT_SESSION_WINDOW_SECS,
)
from .repo import DEFAULT_CACHE_CAPACITY

__all__ = ["DaemonConfig", "load_config", "DEFAULT_API_PORT", "DEFAULT_POLL_INTERVAL_SECS"]

log = logging.getLogger(__name__)

DEFAULT_API_PORT = 8645
DEFAULT_POLL_INTERVAL_SECS = 2.0


@dataclass
class DaemonConfig:
    home_root: Path = field(default_factory=Path.home)
    poll_interval_secs: float = DEFAULT_POLL_INTERVAL_SECS
    cache_capacity: int = DEFAULT_CACHE_CAPACITY
    session_window_secs: float = DEFAULT_SESSION_WINDOW_SECS
    media_subtypes: frozenset[str] = DEFAULT_MEDIA_SUBTYPES
    api_port: int = DEFAULT_API_PORT
    ui_dir: Path | None = None
    visit_log_path: Path | None = None
    # When set, fingerprints come from files instead of live tools; both
    # paths are re-read on every poll so edits are picked up.
    interface_report_path: Path | None = None
    resolv_conf_path: Path | None = None


def load_config(path: Path | str) -> DaemonConfig:
    config = DaemonConfig()
    for number, line in enumerate(Path(path).read_text().splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ValueError(f"config line {number}: missing '='")
        key, value = stripped.split("=", 1)
        key = key.strip()
        value = value.strip()
        if key == "home_root":
            config.home_root = Path(value)
        elif key == "poll_interval_secs":
            config.poll_interval_secs = float(value)
        elif key == "cache_capacity":
            config.cache_capacity = int(value)
        elif key == "session_window_secs":
            config.session_window_secs = float(value)
        elif key == "media_subtypes":
            config.media_subtypes = frozenset(
                part.strip() for part in value.split(",") if part.strip()
            )
        elif key == "api_port":
            config.api_port = int(value)
        elif key == "ui_dir":
            config.ui_dir = Path(value)
        elif key == "visit_log_path":
            config.visit_log_path = Path(value)
        elif key == "interface_report_path":
            config.interface_report_path = Path(value)
        elif key == "resolv_conf_path":
            config.resolv_conf_path = Path(value)
        else:
            log.warning("config line %d: unknown key %r", number, key)
    return config
