"""Workspace file round-trips, version gating, and corruption handling."""

from __future__ import annotations

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from builders import random_workspace
from strata.errors import CorruptFile, IoError, VersionMismatch
from strata.service.persistence import (
    load_workspace,
    save_workspace,
    workspace_file_bytes,
)


def test_roundtrip_three_canvas_workspace(tmp_path):
    ws = random_workspace(3, ops=20)
    path = tmp_path / "w.json"
    save_workspace(ws, path)
    again = load_workspace(path)
    assert again.to_dict() == ws.to_dict()
    assert workspace_file_bytes(again) == workspace_file_bytes(ws)


@given(seed=st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_roundtrip_random(seed, tmp_path_factory):
    ws = random_workspace(seed, ops=25)
    path = tmp_path_factory.mktemp("ws") / "w.json"
    save_workspace(ws, path)
    assert load_workspace(path).to_dict() == ws.to_dict()


def test_saved_at_tracks_modified_at(tmp_path):
    ws = random_workspace(1, ops=5)
    document = json.loads(workspace_file_bytes(ws))
    assert document["saved_at"] == ws.modified_at
    assert document["format_version"] == 1


def test_unsupported_version(tmp_path):
    ws = random_workspace(2, ops=3)
    path = tmp_path / "w.json"
    document = json.loads(workspace_file_bytes(ws))
    document["format_version"] = 999
    path.write_text(json.dumps(document))
    with pytest.raises(VersionMismatch):
        load_workspace(path)


def test_unknown_future_field_rejected(tmp_path):
    ws = random_workspace(2, ops=3)
    path = tmp_path / "w.json"
    document = json.loads(workspace_file_bytes(ws))
    document["shiny_new_feature"] = {"x": 1}
    path.write_text(json.dumps(document))
    with pytest.raises(VersionMismatch):
        load_workspace(path)


def test_truncated_file(tmp_path):
    ws = random_workspace(4, ops=5)
    path = tmp_path / "w.json"
    save_workspace(ws, path)
    data = path.read_bytes()
    path.write_bytes(data[:len(data) // 2])
    with pytest.raises(CorruptFile):
        load_workspace(path)


def test_wrong_shape(tmp_path):
    path = tmp_path / "w.json"
    path.write_text(json.dumps({"format_version": 1, "saved_at": 0,
                                "workspace": {"id": "x"}}))
    with pytest.raises(CorruptFile):
        load_workspace(path)


def test_missing_file(tmp_path):
    with pytest.raises(IoError):
        load_workspace(tmp_path / "absent.json")


def test_atomic_write_leaves_no_temp_files(tmp_path):
    ws = random_workspace(5, ops=10)
    path = tmp_path / "w.json"
    for _ in range(3):
        save_workspace(ws, path)
    leftovers = [p for p in tmp_path.iterdir() if p.name != "w.json"]
    assert leftovers == []


def test_stray_temp_file_does_not_break_load(tmp_path):
    ws = random_workspace(6, ops=8)
    path = tmp_path / "w.json"
    save_workspace(ws, path)
    (tmp_path / "w.json.crashed.tmp").write_text("{garbage")
    loaded = load_workspace(path)
    loaded.check_invariants()
