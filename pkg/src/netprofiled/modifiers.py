"""Apply a profile to application config files under a sandboxed root.

Backends: browser homepage (firefox prefs.js), default media apps
(mimeapps.list), messenger account activation (pidgin accounts.xml), and an
email launcher. Each backend edits only its own lines/elements and leaves the
rest of the file byte-identical; paths in reports and errors are relative to
the sandbox root so the output does not depend on where the sandbox lives.
"""

from __future__ import annotations

import re
import shlex
import subprocess
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path

from .profiles import NetworkProfile

__all__ = [
    "ChangeReport",
    "RecordingLauncher",
    "SubprocessLauncher",
    "LaunchError",
    "MissingProfilesIniError",
    "MissingPathKeyError",
    "AccountNotFoundError",
    "MalformedXmlError",
    "apply_profile",
    "browser_homepage_apply",
    "default_media_apply",
    "messenger_apply",
    "email_apply",
]

PROFILES_INI_RELPATH = Path(".mozilla/firefox/profiles.ini")
MIMEAPPS_RELPATH = Path(".local/share/applications/mimeapps.list")
ACCOUNTS_XML_RELPATH = Path(".purple/accounts.xml")

HOMEPAGE_PREF = "browser.startup.homepage"
_PREF_MARKER = f'user_pref("{HOMEPAGE_PREF}",'
_PREF_LINE_RE = re.compile(
    r'^(.*user_pref\("browser\.startup\.homepage",\s*)"([^"]*)"(.*)$'
)
_MIMEAPPS_DEFAULT_SECTION = "[Default Applications]"


class LaunchError(RuntimeError):
    pass


class MissingProfilesIniError(FileNotFoundError):
    pass


class MissingPathKeyError(ValueError):
    pass


class AccountNotFoundError(ValueError):
    pass


class MalformedXmlError(ValueError):
    pass


@dataclass
class ChangeReport:
    modifier_name: str
    changed: bool = False
    details: list[tuple[str, str]] = field(default_factory=list)
    launched: str | None = None
    error: str | None = None

    def to_dict(self) -> dict:
        return {
            "modifier_name": self.modifier_name,
            "changed": self.changed,
            "details": [list(item) for item in self.details],
            "launched": self.launched,
            "error": self.error,
        }


class RecordingLauncher:
    """Records command lines instead of spawning anything; test double."""

    def __init__(self, fail_with: str | None = None) -> None:
        self.commands: list[str] = []
        self.fail_with = fail_with

    def launch(self, command: str) -> None:
        if self.fail_with is not None:
            raise LaunchError(self.fail_with)
        self.commands.append(command)


class SubprocessLauncher:
    """Spawns the command detached; used only by the live daemon."""

    def launch(self, command: str) -> None:
        try:
            subprocess.Popen(
                shlex.split(command),
                stdout=subprocess.DEVNULL,
                stderr=subprocess.DEVNULL,
                start_new_session=True,
            )
        except (OSError, ValueError) as exc:
            raise LaunchError(str(exc)) from exc


def apply_profile(
    profile: NetworkProfile, sandbox_root: Path | str, launcher
) -> list[ChangeReport]:
    """Run the enabled backends in fixed order; one backend failing never
    stops the others. A backend is enabled when its profile field is set."""
    sandbox_root = Path(sandbox_root)
    reports = []
    if profile.homepage_url:
        reports.append(
            _guarded("browser", browser_homepage_apply, profile.homepage_url, sandbox_root)
        )
    else:
        reports.append(ChangeReport("browser"))
    if profile.default_media:
        reports.append(
            _guarded("media", default_media_apply, profile.default_media, sandbox_root)
        )
    else:
        reports.append(ChangeReport("media"))
    if profile.messenger_account:
        reports.append(
            _guarded("messenger", messenger_apply, profile.messenger_account, sandbox_root)
        )
    else:
        reports.append(ChangeReport("messenger"))
    reports.append(email_apply(profile.email_command, launcher))
    return reports


def _guarded(name: str, backend, *args) -> ChangeReport:
    try:
        return backend(*args)
    except Exception as exc:  # noqa: BLE001 - isolation contract
        return ChangeReport(name, error=f"{type(exc).__name__}: {exc}")


# --- browser -----------------------------------------------------------


def browser_homepage_apply(url: str, sandbox_root: Path | str) -> ChangeReport:
    """Point the firefox startup homepage at `url`.

    The profile directory comes from the `Path=` key of the first profile
    section in profiles.ini; within its prefs.js only the homepage line is
    rewritten (or appended when missing).
    """
    sandbox_root = Path(sandbox_root)
    ini_path = sandbox_root / PROFILES_INI_RELPATH
    if not ini_path.is_file():
        raise MissingProfilesIniError(f"{PROFILES_INI_RELPATH} not found")
    profile_dir = _profile_dir_from_ini(ini_path.read_text(encoding="utf-8"))
    prefs_path = ini_path.parent / profile_dir / "prefs.js"
    prefs_rel = str(PROFILES_INI_RELPATH.parent / profile_dir / "prefs.js")

    original = prefs_path.read_text(encoding="utf-8") if prefs_path.is_file() else ""
    updated, details = _rewrite_prefs(original, url, prefs_rel)
    if updated == original:
        return ChangeReport("browser", changed=False)
    prefs_path.parent.mkdir(parents=True, exist_ok=True)
    prefs_path.write_text(updated, encoding="utf-8")
    return ChangeReport("browser", changed=True, details=details)


def _profile_dir_from_ini(text: str) -> str:
    section = None
    for line in text.splitlines():
        stripped = line.strip()
        if stripped.startswith("[") and stripped.endswith("]"):
            section = stripped[1:-1]
            continue
        if section is None or not section.startswith("Profile"):
            continue
        if stripped.startswith("Path="):
            return stripped[len("Path=") :]
    raise MissingPathKeyError("no profile section with a Path key")


def _rewrite_prefs(text: str, url: str, relpath: str) -> tuple[str, list]:
    canonical = f'user_pref("{HOMEPAGE_PREF}", "{url}");'
    details = []
    lines = text.split("\n")
    matched = False
    for index, line in enumerate(lines):
        if _PREF_MARKER not in line:
            continue
        matched = True
        parts = _PREF_LINE_RE.match(line)
        if parts is not None:
            rewritten = f'{parts.group(1)}"{url}"{parts.group(3)}'
        else:
            rewritten = canonical  # unquoted or otherwise odd value form
        if rewritten != line:
            lines[index] = rewritten
            details.append((relpath, f"homepage set to {url}"))
    if matched:
        return "\n".join(lines), details
    updated = text
    if updated and not updated.endswith("\n"):
        updated += "\n"
    updated += canonical + "\n"
    details.append((relpath, f"homepage line added with {url}"))
    return updated, details


# --- default media apps ------------------------------------------------


_MIME_LINE_TEMPLATE = r"^{mime}=(\S+)\.desktop\s*$"


def default_media_apply(
    default_media: dict[str, str], sandbox_root: Path | str
) -> ChangeReport:
    """Rewrite `type/sub=app.desktop` association lines in mimeapps.list."""
    if not default_media:
        return ChangeReport("media", changed=False)
    sandbox_root = Path(sandbox_root)
    path = sandbox_root / MIMEAPPS_RELPATH
    relpath = str(MIMEAPPS_RELPATH)
    original = path.read_text(encoding="utf-8") if path.is_file() else ""
    lines = original.split("\n")
    details = []

    for mime in sorted(default_media):
        app = default_media[mime]
        desktop = app if app.endswith(".desktop") else f"{app}.desktop"
        pattern = re.compile(_MIME_LINE_TEMPLATE.format(mime=re.escape(mime)))
        matched = False
        for index, line in enumerate(lines):
            if not pattern.match(line):
                continue
            matched = True
            replacement = f"{mime}={desktop}"
            if line != replacement:
                lines[index] = replacement
                details.append((relpath, f"{mime} default set to {desktop}"))
        if not matched:
            lines = _insert_in_default_section(lines, f"{mime}={desktop}")
            details.append((relpath, f"{mime} association added: {desktop}"))

    updated = "\n".join(lines)
    if updated == original:
        return ChangeReport("media", changed=False)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(updated, encoding="utf-8")
    return ChangeReport("media", changed=True, details=details)


def _insert_in_default_section(lines: list[str], new_line: str) -> list[str]:
    """Insert after the last entry of [Default Applications], creating the
    section at the end of the file when absent."""
    try:
        start = lines.index(_MIMEAPPS_DEFAULT_SECTION)
    except ValueError:
        out = list(lines)
        while out and out[-1] == "":
            out.pop()
        if out:
            out.append("")
        out.extend([_MIMEAPPS_DEFAULT_SECTION, new_line, ""])
        return out
    end = start + 1
    while end < len(lines) and not lines[end].startswith("[") and lines[end].strip():
        end += 1
    return lines[:end] + [new_line] + lines[end:]


# --- messenger ---------------------------------------------------------


def messenger_apply(account: str, sandbox_root: Path | str) -> ChangeReport:
    """Make `account` the single active, auto-logging-in messenger account.

    The target account's Available status goes active and its auto-login
    setting to 1; every other account is deactivated. The document tree is
    re-serialized conservatively: element order, text and unknown attributes
    survive untouched (attribute quoting is canonicalized to double quotes).
    """
    if not account:
        raise AccountNotFoundError("empty account name")
    sandbox_root = Path(sandbox_root)
    path = sandbox_root / ACCOUNTS_XML_RELPATH
    relpath = str(ACCOUNTS_XML_RELPATH)
    if not path.is_file():
        raise FileNotFoundError(f"{relpath} not found")
    original = path.read_bytes()
    try:
        root = ET.fromstring(original)
    except ET.ParseError as exc:
        raise MalformedXmlError(str(exc)) from exc

    accounts = root.findall("account")
    target = None
    for element in accounts:
        name = element.find("name")
        if name is not None and (name.text or "") == account:
            target = element
            break
    if target is None:
        raise AccountNotFoundError(f"no account named {account!r}")

    details = []
    for element in accounts:
        is_target = element is target
        label = _account_label(element)
        if _set_available_status(element, is_target):
            state = "activated" if is_target else "deactivated"
            details.append((relpath, f"account {label} {state}"))
        if _set_auto_login(element, is_target):
            value = 1 if is_target else 0
            details.append((relpath, f"account {label} auto-login set to {value}"))

    updated = _serialize_accounts(root, original)
    if updated == original:
        return ChangeReport("messenger", changed=False)
    path.write_bytes(updated)
    return ChangeReport("messenger", changed=True, details=details)


def _account_label(element: ET.Element) -> str:
    name = element.find("name")
    return (name.text or "") if name is not None else "?"


def _set_available_status(element: ET.Element, active: bool) -> bool:
    value = "true" if active else "false"
    statuses = element.find("statuses")
    changed = False
    if statuses is not None:
        for status in statuses.findall("status"):
            if status.get("name") != "Available":
                continue
            if status.get("active") != value:
                status.set("active", value)
                changed = True
            return changed
    if not active:
        return False
    # No Available status recorded yet for the target account: add one.
    if statuses is None:
        statuses = ET.SubElement(element, "statuses")
    status = ET.SubElement(statuses, "status")
    status.set("type", "available")
    status.set("name", "Available")
    status.set("active", "true")
    return True


def _set_auto_login(element: ET.Element, enabled: bool) -> bool:
    value = "1" if enabled else "0"
    # Matched by setting name anywhere within the account element; pidgin
    # files nest it under varying <settings ui=...> groups.
    for setting in element.iter("setting"):
        if setting.get("name") != "auto-login":
            continue
        if (setting.text or "").strip() != value:
            setting.text = value
            return True
        return False
    if not enabled:
        return False
    settings = element.find("settings")
    if settings is None:
        settings = ET.SubElement(element, "settings")
        settings.set("ui", "gtk-gaim")
    setting = ET.SubElement(settings, "setting")
    setting.set("name", "auto-login")
    setting.set("type", "bool")
    setting.text = value
    return True


def _serialize_accounts(root: ET.Element, original: bytes) -> bytes:
    first_line = original.split(b"\n", 1)[0]
    declaration = first_line if first_line.startswith(b"<?xml") else b""
    body = ET.tostring(root, encoding="unicode").encode("utf-8")
    parts = [declaration, body] if declaration else [body]
    text = b"\n".join(parts)
    if not text.endswith(b"\n"):
        text += b"\n"
    return text


# --- email -------------------------------------------------------------


def email_apply(command: str, launcher) -> ChangeReport:
    """Hand the configured mail command to the launcher; launching is not a
    file change, so `changed` stays false and the command is reported via
    `launched`."""
    if not command:
        return ChangeReport("email", changed=False)
    try:
        launcher.launch(command)
    except LaunchError as exc:
        return ChangeReport("email", error=str(exc))
    return ChangeReport("email", changed=False, launched=command)
