"""Per-network user profile and its on-disk `key=value` line format."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

__all__ = [
    "NetworkProfile",
    "ProfileDecodeError",
    "encode_profile",
    "decode_profile",
]

_TEXT_KEYS = ("display_name", "homepage_url", "messenger_account", "email_command")
_MEDIA_PREFIX = "media."


class ProfileDecodeError(ValueError):
    """Profile file content that does not follow the key=value grammar."""


@dataclass
class NetworkProfile:
    display_name: str = ""
    homepage_url: str = ""
    default_media: dict[str, str] = field(default_factory=dict)
    messenger_account: str = ""
    email_command: str = ""
    is_home: bool = False

    def __post_init__(self) -> None:
        for key in _TEXT_KEYS:
            if "\n" in getattr(self, key):
                raise ValueError(f"{key} must not contain newlines")
        for mime, app in self.default_media.items():
            if mime.count("/") != 1 or any(c in mime for c in "=\n \t"):
                raise ValueError(f"bad MIME key {mime!r}")
            if "\n" in app:
                raise ValueError(f"bad application id {app!r}")

    def to_dict(self) -> dict[str, Any]:
        return {
            "display_name": self.display_name,
            "homepage_url": self.homepage_url,
            "default_media": dict(self.default_media),
            "messenger_account": self.messenger_account,
            "email_command": self.email_command,
            "is_home": self.is_home,
        }

    @classmethod
    def from_dict(cls, doc: Any) -> "NetworkProfile":
        if not isinstance(doc, dict):
            raise ValueError("profile document must be an object")
        kwargs: dict[str, Any] = {}
        for key in _TEXT_KEYS:
            value = doc.get(key, "")
            if not isinstance(value, str):
                raise ValueError(f"{key} must be a string")
            kwargs[key] = value
        media = doc.get("default_media", {})
        if not isinstance(media, dict) or not all(
            isinstance(k, str) and isinstance(v, str) for k, v in media.items()
        ):
            raise ValueError("default_media must map MIME strings to app strings")
        kwargs["default_media"] = dict(media)
        is_home = doc.get("is_home", False)
        if not isinstance(is_home, bool):
            raise ValueError("is_home must be a boolean")
        kwargs["is_home"] = is_home
        unknown = set(doc) - set(kwargs)
        if unknown:
            raise ValueError(f"unknown profile fields: {sorted(unknown)}")
        return cls(**kwargs)


def encode_profile(profile: NetworkProfile) -> str:
    """Render the profile in its file format; key order is fixed so the
    encoding is deterministic."""
    lines = [
        f"display_name={profile.display_name}",
        f"homepage_url={profile.homepage_url}",
        f"messenger_account={profile.messenger_account}",
        f"email_command={profile.email_command}",
        f"is_home={'true' if profile.is_home else 'false'}",
    ]
    for mime in sorted(profile.default_media):
        lines.append(f"{_MEDIA_PREFIX}{mime}={profile.default_media[mime]}")
    return "\n".join(lines) + "\n"


def decode_profile(text: str) -> tuple[NetworkProfile, list[str]]:
    """Parse the file format back into a profile.

    Returns (profile, warnings); unknown keys are reported as warnings rather
    than dropped silently. Structural problems raise ProfileDecodeError.
    """
    fields: dict[str, Any] = {}
    media: dict[str, str] = {}
    warnings: list[str] = []
    # The format is \n-delimited; values may carry any other byte, so the
    # broader splitlines() boundaries must not apply here.
    for number, line in enumerate(text.split("\n"), start=1):
        if not line.strip():
            continue
        if "=" not in line:
            raise ProfileDecodeError(f"line {number}: missing '='")
        key, value = line.split("=", 1)
        if key in _TEXT_KEYS:
            fields[key] = value
        elif key == "is_home":
            if value == "true":
                fields["is_home"] = True
            elif value == "false":
                fields["is_home"] = False
            else:
                raise ProfileDecodeError(
                    f"line {number}: is_home must be true or false, got {value!r}"
                )
        elif key.startswith(_MEDIA_PREFIX):
            mime = key[len(_MEDIA_PREFIX) :]
            if mime.count("/") != 1:
                raise ProfileDecodeError(f"line {number}: bad MIME key {mime!r}")
            media[mime] = value
        else:
            warnings.append(f"line {number}: unknown key {key!r}")
    if media:
        fields["default_media"] = media
    try:
        return NetworkProfile(**fields), warnings
    except ValueError as exc:
        raise ProfileDecodeError(str(exc)) from exc
