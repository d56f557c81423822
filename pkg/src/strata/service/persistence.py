"""Workspace files: versioned, canonical JSON, written atomically.

``saved_at`` mirrors the workspace's own ``modified_at`` so that replaying a
mutation log reproduces the file byte-for-byte.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

from ..clock import Clock, system_clock
from ..errors import CorruptFile, IoError, VersionMismatch
from ..workspace import FORMAT_VERSION, Workspace

_TOP_LEVEL_KEYS = {"format_version", "workspace", "saved_at"}


def workspace_file_bytes(workspace: Workspace) -> bytes:
    document = {
        "format_version": FORMAT_VERSION,
        "workspace": workspace.to_dict(),
        "saved_at": workspace.modified_at,
    }
    return (json.dumps(document, indent=2, sort_keys=True, ensure_ascii=False)
            + "\n").encode("utf-8")


def save_workspace(workspace: Workspace, path: str | Path) -> None:
    """Serialize to ``path`` via a same-directory temp file + rename, so a
    crash mid-write never leaves a truncated workspace file."""
    target = Path(path)
    data = workspace_file_bytes(workspace)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp_name = tempfile.mkstemp(dir=target.parent,
                                        prefix=target.name, suffix=".tmp")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(data)
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp_name, target)
        except BaseException:
            if os.path.exists(tmp_name):
                os.unlink(tmp_name)
            raise
    except OSError as exc:
        raise IoError(f"cannot write workspace file {target}: {exc}") from exc


def load_workspace(path: str | Path, clock: Clock = system_clock) -> Workspace:
    source = Path(path)
    try:
        text = source.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read workspace file {source}: {exc}") from exc
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorruptFile(f"workspace file {source} is not valid JSON: {exc}") from exc
    if not isinstance(document, dict):
        raise CorruptFile(f"workspace file {source} is not an object")
    unknown = document.keys() - _TOP_LEVEL_KEYS
    if unknown:
        raise VersionMismatch(
            f"workspace file {source} carries unknown fields {sorted(unknown)}; "
            "written by a newer version?")
    missing = _TOP_LEVEL_KEYS - document.keys()
    if missing:
        raise CorruptFile(f"workspace file {source} missing fields {sorted(missing)}")
    version = document["format_version"]
    if version != FORMAT_VERSION:
        raise VersionMismatch(
            f"workspace file {source} has format_version {version}; "
            f"this build reads version {FORMAT_VERSION}")
    workspace = Workspace.from_dict(document["workspace"], clock=clock)
    try:
        workspace.check_invariants()
    except AssertionError as exc:
        raise CorruptFile(f"workspace file {source} violates invariants: {exc}") from exc
    return workspace
