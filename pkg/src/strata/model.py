"""Domain types for the canvas workspace: nodes, edges, canvases, hierarchy.

Pure data plus serialization. All mutation logic lives in
:mod:`strata.workspace`; nothing here performs I/O or talks to a model
provider.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from .errors import CorruptFile

CanvasId = str
NodeId = str
EdgeId = str


class NodeKind(str, Enum):
    CONCEPT = "concept"
    RESPONSE = "response"
    QUESTION = "question"
    GROUP = "group"
    PORTAL = "portal"


class TopicSource(str, Enum):
    USER_SET = "user_set"
    LLM_SUMMARIZED = "llm_summarized"
    INHERITED_FROM_DIVE = "inherited_from_dive"


class ProvenanceKind(str, Enum):
    USER_TYPED = "user_typed"
    LLM_GENERATED = "llm_generated"
    EXTRACTED = "extracted"


class SemanticLevel(str, Enum):
    """Detail levels for node renditions. ALL is the node's own text and is
    never stored; the other three are derived and cached on the node."""

    ALL = "all"
    LINES = "lines"
    SUMMARY = "summary"
    KEYWORDS = "keywords"

    @property
    def detail(self) -> int:
        """Rank in the total detail order ALL > LINES > SUMMARY > KEYWORDS."""
        return _DETAIL_RANK[self]


_DETAIL_RANK = {
    SemanticLevel.KEYWORDS: 0,
    SemanticLevel.SUMMARY: 1,
    SemanticLevel.LINES: 2,
    SemanticLevel.ALL: 3,
}

# Levels that may be stored in a node's rendition set.
STORED_LEVELS = (SemanticLevel.LINES, SemanticLevel.SUMMARY, SemanticLevel.KEYWORDS)

PLACEHOLDER_TOPIC = "Untitled"


@dataclass(frozen=True)
class Provenance:
    """Where a node's text came from. Extraction records the source node and
    the byte span at extraction time; the span is historical and is not
    re-validated after later edits to the source."""

    kind: ProvenanceKind
    source_node: NodeId | None = None
    span: tuple[int, int] | None = None

    @classmethod
    def user_typed(cls) -> "Provenance":
        return cls(ProvenanceKind.USER_TYPED)

    @classmethod
    def llm_generated(cls) -> "Provenance":
        return cls(ProvenanceKind.LLM_GENERATED)

    @classmethod
    def extracted(cls, source_node: NodeId, span: tuple[int, int]) -> "Provenance":
        return cls(ProvenanceKind.EXTRACTED, source_node, span)

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {"kind": self.kind.value}
        if self.kind is ProvenanceKind.EXTRACTED:
            d["source_node"] = self.source_node
            d["span"] = list(self.span or ())
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "Provenance":
        kind = ProvenanceKind(d["kind"])
        if kind is ProvenanceKind.EXTRACTED:
            span = d["span"]
            return cls(kind, d["source_node"], (int(span[0]), int(span[1])))
        return cls(kind)


@dataclass
class Rendition:
    """One cached derived text. ``stale`` flips when the node text changes;
    a stale rendition is never served."""

    text: str
    stale: bool = False

    def to_dict(self) -> dict[str, Any]:
        return {"text": self.text, "stale": self.stale}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "Rendition":
        return cls(text=d["text"], stale=bool(d["stale"]))


@dataclass
class Node:
    id: NodeId
    kind: NodeKind
    text: str
    position: tuple[float, float]
    created_at: int
    size: tuple[float, float] | None = None
    portal_target: CanvasId | None = None
    provenance: Provenance = field(default_factory=Provenance.user_typed)
    renditions: dict[SemanticLevel, Rendition] = field(default_factory=dict)

    def fresh_rendition(self, level: SemanticLevel) -> Rendition | None:
        r = self.renditions.get(level)
        return r if r is not None and not r.stale else None

    def invalidate_renditions(self) -> None:
        for r in self.renditions.values():
            r.stale = True

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "kind": self.kind.value,
            "text": self.text,
            "position": [self.position[0], self.position[1]],
            "size": None if self.size is None else [self.size[0], self.size[1]],
            "portal_target": self.portal_target,
            "provenance": self.provenance.to_dict(),
            "renditions": {lv.value: r.to_dict() for lv, r in self.renditions.items()},
            "created_at": self.created_at,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "Node":
        _require_keys(d, {"id", "kind", "text", "position", "size", "portal_target",
                          "provenance", "renditions", "created_at"}, "node")
        return cls(
            id=d["id"],
            kind=NodeKind(d["kind"]),
            text=d["text"],
            position=(float(d["position"][0]), float(d["position"][1])),
            size=None if d["size"] is None else (float(d["size"][0]), float(d["size"][1])),
            portal_target=d["portal_target"],
            provenance=Provenance.from_dict(d["provenance"]),
            renditions={SemanticLevel(lv): Rendition.from_dict(r)
                        for lv, r in d["renditions"].items()},
            created_at=int(d["created_at"]),
        )


@dataclass
class Edge:
    id: EdgeId
    source: NodeId
    target: NodeId
    label: str | None = None

    def to_dict(self) -> dict[str, Any]:
        return {"id": self.id, "source": self.source, "target": self.target,
                "label": self.label}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "Edge":
        _require_keys(d, {"id", "source", "target", "label"}, "edge")
        return cls(id=d["id"], source=d["source"], target=d["target"], label=d["label"])


@dataclass
class CanvasLayer:
    """One infinite whiteboard: a topic label plus its nodes, edges, and flat
    group membership (member node id -> group node id)."""

    id: CanvasId
    topic: str
    topic_source: TopicSource
    nodes: dict[NodeId, Node] = field(default_factory=dict)
    edges: dict[EdgeId, Edge] = field(default_factory=dict)
    groups: dict[NodeId, NodeId] = field(default_factory=dict)

    def edge_between(self, source: NodeId, target: NodeId) -> Edge | None:
        for e in self.edges.values():
            if e.source == source and e.target == target:
                return e
        return None

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "topic": self.topic,
            "topic_source": self.topic_source.value,
            "nodes": {nid: n.to_dict() for nid, n in self.nodes.items()},
            "edges": {eid: e.to_dict() for eid, e in self.edges.items()},
            "groups": dict(self.groups),
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "CanvasLayer":
        _require_keys(d, {"id", "topic", "topic_source", "nodes", "edges", "groups"},
                      "canvas")
        return cls(
            id=d["id"],
            topic=d["topic"],
            topic_source=TopicSource(d["topic_source"]),
            nodes={nid: Node.from_dict(nd) for nid, nd in d["nodes"].items()},
            edges={eid: Edge.from_dict(ed) for eid, ed in d["edges"].items()},
            groups=dict(d["groups"]),
        )


@dataclass
class Hierarchy:
    """Vertical structure over canvases: a forest. ``parent_of`` is partial
    (roots are absent); ``child_order`` keeps children ordered per parent."""

    parent_of: dict[CanvasId, CanvasId] = field(default_factory=dict)
    child_order: dict[CanvasId, list[CanvasId]] = field(default_factory=dict)

    def parent(self, canvas: CanvasId) -> CanvasId | None:
        return self.parent_of.get(canvas)

    def children(self, canvas: CanvasId) -> list[CanvasId]:
        return list(self.child_order.get(canvas, []))

    def attach(self, child: CanvasId, parent: CanvasId) -> None:
        self.parent_of[child] = parent
        self.child_order.setdefault(parent, []).append(child)

    def detach(self, child: CanvasId) -> None:
        parent = self.parent_of.pop(child, None)
        if parent is not None and parent in self.child_order:
            order = self.child_order[parent]
            if child in order:
                order.remove(child)
            if not order:
                del self.child_order[parent]

    def descendants(self, canvas: CanvasId) -> list[CanvasId]:
        """Canvas itself plus all transitive children, preorder."""
        out: list[CanvasId] = []
        stack = [canvas]
        while stack:
            c = stack.pop()
            out.append(c)
            stack.extend(reversed(self.child_order.get(c, [])))
        return out

    def depth_below(self, canvas: CanvasId) -> int:
        """Number of canvas levels in the subtree rooted at ``canvas`` (>= 1)."""
        best = 1
        for child in self.child_order.get(canvas, []):
            best = max(best, 1 + self.depth_below(child))
        return best

    def to_dict(self) -> dict[str, Any]:
        return {
            "parent_of": dict(self.parent_of),
            "child_order": {p: list(cs) for p, cs in self.child_order.items()},
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "Hierarchy":
        _require_keys(d, {"parent_of", "child_order"}, "hierarchy")
        return cls(
            parent_of=dict(d["parent_of"]),
            child_order={p: list(cs) for p, cs in d["child_order"].items()},
        )


def _require_keys(d: dict[str, Any], expected: set[str], what: str) -> None:
    if not isinstance(d, dict):
        raise CorruptFile(f"{what} record is not an object")
    missing = expected - d.keys()
    extra = d.keys() - expected
    if missing:
        raise CorruptFile(f"{what} record missing fields: {sorted(missing)}")
    if extra:
        raise CorruptFile(f"{what} record has unknown fields: {sorted(extra)}")
