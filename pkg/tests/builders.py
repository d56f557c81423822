"""Seeded random builders shared by property and acceptance tests."""

from __future__ import annotations

import random

from strata.clock import TickingClock
from strata.errors import StrataError
from strata.model import NodeKind, TopicSource
from strata.workspace import Workspace

WORDS = ["harbor", "transit", "climate", "rent", "museums", "parks", "food",
         "nightlife", "schools", "startups", "fog", "hills", "bridges"]

CREATABLE_KINDS = [NodeKind.CONCEPT, NodeKind.RESPONSE, NodeKind.QUESTION]


def random_text(rng: random.Random, lo: int = 1, hi: int = 6) -> str:
    return " ".join(rng.choice(WORDS) for _ in range(rng.randint(lo, hi)))


def apply_random_op(ws: Workspace, rng: random.Random) -> str | None:
    """Apply one randomly chosen mutation, tolerating precondition failures.
    Returns the op name actually applied, or None when the attempt bounced."""
    op = rng.choice([
        "create_node", "create_node", "set_node_text", "extract", "group",
        "connect", "dive", "add_above", "add_subtopic", "new_hierarchy",
        "delete_branch", "copy_paste", "set_topic",
    ])
    canvases = list(ws.canvases)
    canvas_id = rng.choice(canvases)
    canvas = ws.canvases[canvas_id]
    node_ids = list(canvas.nodes)
    try:
        if op == "create_node":
            ws.create_node(canvas_id, rng.choice(CREATABLE_KINDS),
                           random_text(rng), (rng.uniform(-500, 500), rng.uniform(-500, 500)))
        elif op == "set_node_text":
            if not node_ids:
                return None
            ws.set_node_text(canvas_id, rng.choice(node_ids), random_text(rng))
        elif op == "extract":
            sources = [n for n in canvas.nodes.values() if len(n.text) >= 2]
            if not sources:
                return None
            src = rng.choice(sources)
            raw = src.text.encode("utf-8")
            start = rng.randrange(0, len(raw) // 2 + 1)
            end = rng.randrange(start + 1, len(raw) + 1)
            ws.extract_text(canvas_id, src.id, (start, end), (0.0, 0.0))
        elif op == "group":
            free = [nid for nid, n in canvas.nodes.items()
                    if nid not in canvas.groups and n.kind is not NodeKind.GROUP]
            if not free:
                return None
            members = rng.sample(free, rng.randint(1, min(3, len(free))))
            ws.group_nodes(canvas_id, members, random_text(rng, 1, 2))
        elif op == "connect":
            if len(node_ids) < 2:
                return None
            a, b = rng.sample(node_ids, 2)
            ws.connect(canvas_id, a, b)
        elif op == "dive":
            divable = [nid for nid, n in canvas.nodes.items()
                       if n.kind is not NodeKind.GROUP]
            if not divable:
                return None
            ws.semantic_dive(canvas_id, rng.choice(divable))
        elif op == "add_above":
            count = rng.randint(1, min(2, len(ws.roots)))
            ws.add_canvas_above(rng.sample(ws.roots, count), random_text(rng, 1, 3))
        elif op == "add_subtopic":
            ws.add_subtopic_canvas(canvas_id, random_text(rng, 1, 3),
                                   generated=rng.random() < 0.5)
        elif op == "new_hierarchy":
            ws.create_hierarchy(random_text(rng, 1, 3))
        elif op == "delete_branch":
            ws.delete_canvas_branch(canvas_id)
        elif op == "copy_paste":
            if not node_ids:
                return None
            picked = rng.sample(node_ids, rng.randint(1, min(4, len(node_ids))))
            payload = ws.copy_subgraph(canvas_id, picked)
            target = rng.choice(list(ws.canvases))
            ws.paste_subgraph(target, payload, (rng.uniform(-50, 50), 100.0))
        elif op == "set_topic":
            source = rng.choice([TopicSource.USER_SET, TopicSource.LLM_SUMMARIZED])
            ws.set_canvas_topic(canvas_id, random_text(rng, 1, 3), source)
    except StrataError:
        return None
    return op


def random_workspace(seed: int, ops: int = 30) -> Workspace:
    rng = random.Random(seed)
    ws = Workspace.new(f"ws-{seed}", random_text(rng, 1, 3),
                       TickingClock(start=1_700_000_000_000, step=137))
    for _ in range(ops):
        apply_random_op(ws, rng)
    return ws
