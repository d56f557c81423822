"""Property tests over random operation sequences: the hierarchy stays a
forest, portals stay consistent, and derived quantities match brute force."""

from __future__ import annotations

import random

from hypothesis import given, settings
from hypothesis import strategies as st

from builders import apply_random_op, random_workspace
from oracles import longest_chain_depth
from strata.clock import TickingClock
from strata.model import NodeKind
from strata.workspace import Workspace


@given(seed=st.integers(0, 2**32 - 1), length=st.integers(1, 50))
@settings(max_examples=150, deadline=None)
def test_random_sequences_hold_invariants(seed, length):
    rng = random.Random(seed)
    ws = Workspace.new("w", "root topic", TickingClock())
    for _ in range(length):
        apply_random_op(ws, rng)
        ws.check_invariants()


@given(seed=st.integers(0, 2**32 - 1))
@settings(max_examples=100, deadline=None)
def test_depth_matches_bruteforce(seed):
    ws = random_workspace(seed, ops=25)
    assert ws.hierarchy_depth() == longest_chain_depth(
        dict(ws.hierarchy.parent_of), set(ws.canvases))


@given(seed=st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_paste_is_isomorphic(seed):
    """Pasting a copied subgraph reproduces the induced subgraph: same kinds
    (modulo Portal -> Concept), same edge relation, positions shifted by a
    constant, same group structure."""
    rng = random.Random(seed)
    ws = random_workspace(seed, ops=20)
    canvas_id = rng.choice([c for c in ws.canvases if ws.canvases[c].nodes]
                           or list(ws.canvases))
    canvas = ws.canvases[canvas_id]
    if not canvas.nodes:
        return
    picked = rng.sample(list(canvas.nodes), rng.randint(1, len(canvas.nodes)))
    selected = set(picked)
    induced_edges = {(e.source, e.target, e.label) for e in canvas.edges.values()
                     if e.source in selected and e.target in selected}
    induced_groups = {(m, g) for m, g in canvas.groups.items()
                      if m in selected and g in selected}
    originals = {nid: (canvas.nodes[nid].kind, canvas.nodes[nid].text,
                       canvas.nodes[nid].position) for nid in picked}

    payload = ws.copy_subgraph(canvas_id, picked)
    offset = (rng.uniform(-200, 200), rng.uniform(-200, 200))
    mapping = ws.paste_subgraph(canvas_id, payload, offset)

    assert set(mapping) == selected
    for old, new in mapping.items():
        kind, text, pos = originals[old]
        pasted = canvas.nodes[new]
        expected_kind = NodeKind.CONCEPT if kind is NodeKind.PORTAL else kind
        assert pasted.kind is expected_kind
        assert pasted.text == text
        assert pasted.position[0] == pos[0] + offset[0]
        assert pasted.position[1] == pos[1] + offset[1]
    pasted_ids = set(mapping.values())
    pasted_edges = {(e.source, e.target, e.label) for e in canvas.edges.values()
                    if e.source in pasted_ids and e.target in pasted_ids}
    assert pasted_edges == {(mapping[s], mapping[t], lbl)
                            for s, t, lbl in induced_edges}
    pasted_groups = {(m, g) for m, g in canvas.groups.items() if m in pasted_ids}
    assert pasted_groups == {(mapping[m], mapping[g]) for m, g in induced_groups}
    ws.check_invariants()


@given(seed=st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_serialization_roundtrip_random(seed):
    ws = random_workspace(seed, ops=25)
    clone = Workspace.from_dict(ws.to_dict())
    assert clone.to_dict() == ws.to_dict()
    clone.check_invariants()


@given(seed=st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_replaying_same_seed_is_deterministic(seed):
    assert random_workspace(seed, ops=20).to_dict() == \
        random_workspace(seed, ops=20).to_dict()
