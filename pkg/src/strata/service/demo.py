"""Demo workspace for manual exploration: a small relocation-research
hierarchy with a few canvas nodes, all built through the normal mutation
path so it is logged and replayable like any live session."""

from __future__ import annotations

from ..llm.gateway import Gateway
from ..model import NodeKind, Provenance
from .store import WorkspaceStore

DEMO_ID = "demo"

WHARF = ("Fisherman's Wharf is a popular tourist destination located in San "
         "Francisco, California, USA. It is a historic waterfront district that "
         "dates back to the mid-1800s, when it was primarily a fishing village.")


def seed_demo(store: WorkspaceStore, gateway: Gateway | None = None) -> str:
    if DEMO_ID in store.list_ids():
        return DEMO_ID
    session = store.create_workspace("Moving to San Francisco", DEMO_ID)
    root = session.workspace.roots[0]

    def node(kind: NodeKind, text: str, position, canvas=root) -> str:
        return store.apply(DEMO_ID, "create_node", {
            "canvas": canvas, "kind": kind.value, "text": text,
            "position": list(position),
            "provenance": Provenance.user_typed().to_dict()})

    culture = node(NodeKind.CONCEPT, "San Francisco Culture", (-220.0, -60.0))
    node(NodeKind.QUESTION,
         "Why should I live outside of downtown San Francisco?",
         (-260.0, 120.0))
    wharf = node(NodeKind.RESPONSE, WHARF, (220.0, -20.0))
    attractions = node(NodeKind.CONCEPT, "local attractions", (220.0, 220.0))
    store.apply(DEMO_ID, "connect", {"canvas": root, "source": culture,
                                     "target": wharf, "label": None})
    store.apply(DEMO_ID, "connect", {"canvas": root, "source": wharf,
                                     "target": attractions, "label": None})
    store.apply(DEMO_ID, "add_subtopic_canvas",
                {"parent": root, "topic": "Sunset District", "generated": False})
    store.apply(DEMO_ID, "add_subtopic_canvas",
                {"parent": root, "topic": "Marina District", "generated": True})
    store.apply(DEMO_ID, "create_hierarchy", {"topic": "Moving to San Jose"})
    return DEMO_ID
