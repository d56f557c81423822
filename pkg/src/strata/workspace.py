"""The workspace engine: deterministic mutation logic over canvases, nodes,
edges, and the canvas hierarchy.

Identifiers come from a per-workspace monotonic counter and timestamps from
an injected clock, so identical operation sequences yield identical
serialized workspaces. No I/O, no provider calls.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Iterable

from .clock import Clock, system_clock
from .errors import (
    AlreadyGrouped,
    CorruptFile,
    DuplicateEdge,
    EmptyJoinList,
    EmptySelection,
    EmptyTopic,
    ForbiddenKind,
    InvalidSpan,
    NotARoot,
    SelfLoop,
    UndivableKind,
    UnknownCanvas,
    UnknownNode,
    UserTopicLocked,
    WouldEmptyWorkspace,
)
from .model import (
    PLACEHOLDER_TOPIC,
    CanvasId,
    CanvasLayer,
    Edge,
    EdgeId,
    Hierarchy,
    Node,
    NodeId,
    NodeKind,
    Provenance,
    ProvenanceKind,
    Rendition,
    SemanticLevel,
    TopicSource,
    _require_keys,
)

FORMAT_VERSION = 1


@dataclass
class ClipboardPayload:
    """Value captured by copy_subgraph: node snapshots plus the edges and
    group memberships induced on the copied set. Safe to paste onto any
    canvas, including in another workspace."""

    nodes: list[dict[str, Any]]
    edges: list[dict[str, Any]]
    groups: dict[NodeId, NodeId]

    def to_dict(self) -> dict[str, Any]:
        return {"nodes": self.nodes, "edges": self.edges, "groups": dict(self.groups)}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "ClipboardPayload":
        _require_keys(d, {"nodes", "edges", "groups"}, "clipboard payload")
        return cls(nodes=list(d["nodes"]), edges=list(d["edges"]),
                   groups=dict(d["groups"]))


@dataclass
class Workspace:
    """A forest of canvas layers linked by a topic hierarchy.

    Always holds at least one canvas. All mutation methods update
    ``modified_at`` from the attached clock; the clock itself is not part of
    the serialized state.
    """

    id: str
    canvases: dict[CanvasId, CanvasLayer]
    hierarchy: Hierarchy
    roots: list[CanvasId]
    created_at: int
    modified_at: int
    next_id: int = 1
    clock: Clock = field(default=system_clock, repr=False, compare=False)

    # --- construction -------------------------------------------------------

    @classmethod
    def new(cls, workspace_id: str, topic: str | None = None,
            clock: Clock = system_clock) -> "Workspace":
        """Fresh workspace with one root canvas. An explicit topic counts as
        user intent and locks out LLM summarization; omitting it leaves the
        placeholder topic open for summarization as content arrives."""
        now = clock()
        ws = cls(id=workspace_id, canvases={}, hierarchy=Hierarchy(), roots=[],
                 created_at=now, modified_at=now, next_id=1, clock=clock)
        canvas_id = ws._fresh_id("c")
        ws.canvases[canvas_id] = CanvasLayer(
            id=canvas_id, topic=topic or PLACEHOLDER_TOPIC,
            topic_source=TopicSource.USER_SET if topic
            else TopicSource.LLM_SUMMARIZED)
        ws.roots.append(canvas_id)
        return ws

    # --- lookups ------------------------------------------------------------

    def canvas(self, canvas_id: CanvasId) -> CanvasLayer:
        try:
            return self.canvases[canvas_id]
        except KeyError:
            raise UnknownCanvas(f"no canvas {canvas_id!r}") from None

    def node(self, canvas_id: CanvasId, node_id: NodeId) -> Node:
        canvas = self.canvas(canvas_id)
        try:
            return canvas.nodes[node_id]
        except KeyError:
            raise UnknownNode(f"no node {node_id!r} on canvas {canvas_id!r}") from None

    def find_node(self, node_id: NodeId) -> tuple[CanvasId, Node]:
        """Locate a node anywhere in the workspace (ids are workspace-unique)."""
        for canvas in self.canvases.values():
            if node_id in canvas.nodes:
                return canvas.id, canvas.nodes[node_id]
        raise UnknownNode(f"no node {node_id!r} in workspace")

    def _fresh_id(self, prefix: str) -> str:
        ident = f"{prefix}{self.next_id}"
        self.next_id += 1
        return ident

    def _touch(self) -> int:
        now = self.clock()
        self.modified_at = now
        return now

    # --- node-level operations ----------------------------------------------

    def create_node(self, canvas_id: CanvasId, kind: NodeKind, text: str,
                    position: tuple[float, float],
                    provenance: Provenance | None = None) -> NodeId:
        """Add a node. Portals cannot be created directly; only a dive makes
        them."""
        canvas = self.canvas(canvas_id)
        if kind is NodeKind.PORTAL:
            raise ForbiddenKind("portal nodes are created only by semantic dive")
        now = self._touch()
        node_id = self._fresh_id("n")
        canvas.nodes[node_id] = Node(
            id=node_id, kind=kind, text=text,
            position=(float(position[0]), float(position[1])),
            created_at=now,
            provenance=provenance or Provenance.user_typed(),
        )
        return node_id

    def set_node_text(self, canvas_id: CanvasId, node_id: NodeId, text: str) -> None:
        """Replace a node's text. Every stored rendition goes stale."""
        node = self.node(canvas_id, node_id)
        node.text = text
        node.invalidate_renditions()
        self._touch()

    def move_node(self, canvas_id: CanvasId, node_id: NodeId,
                  position: tuple[float, float]) -> None:
        node = self.node(canvas_id, node_id)
        node.position = (float(position[0]), float(position[1]))
        self._touch()

    def extract_text(self, canvas_id: CanvasId, source_id: NodeId,
                     span: tuple[int, int],
                     position: tuple[float, float]) -> NodeId:
        """Pull a byte span of the source's text out into a new Concept node.

        Offsets are byte offsets into the UTF-8 encoding and must fall on
        character boundaries.
        """
        source = self.node(canvas_id, source_id)
        start, end = int(span[0]), int(span[1])
        raw = source.text.encode("utf-8")
        if not (0 <= start < end <= len(raw)):
            raise InvalidSpan(f"span ({start}, {end}) outside text of {len(raw)} bytes")
        try:
            fragment = raw[start:end].decode("utf-8")
        except UnicodeDecodeError:
            raise InvalidSpan(
                f"span ({start}, {end}) does not fall on character boundaries"
            ) from None
        now = self._touch()
        node_id = self._fresh_id("n")
        canvas = self.canvases[canvas_id]
        canvas.nodes[node_id] = Node(
            id=node_id, kind=NodeKind.CONCEPT, text=fragment,
            position=(float(position[0]), float(position[1])),
            created_at=now,
            provenance=Provenance.extracted(source_id, (start, end)),
        )
        return node_id

    def group_nodes(self, canvas_id: CanvasId, members: Iterable[NodeId],
                    label: str) -> NodeId:
        """Create a Group node over the members. Groups are flat: a grouped
        node cannot be grouped again and Group nodes cannot be members."""
        canvas = self.canvas(canvas_id)
        member_ids = list(dict.fromkeys(members))
        if not member_ids:
            raise EmptySelection("a group needs at least one member")
        for mid in member_ids:
            node = self.node(canvas_id, mid)
            if node.kind is NodeKind.GROUP:
                raise ForbiddenKind("groups cannot nest")
            if mid in canvas.groups:
                raise AlreadyGrouped(f"node {mid!r} is already grouped")
        now = self._touch()
        cx = sum(canvas.nodes[m].position[0] for m in member_ids) / len(member_ids)
        cy = sum(canvas.nodes[m].position[1] for m in member_ids) / len(member_ids)
        group_id = self._fresh_id("n")
        canvas.nodes[group_id] = Node(
            id=group_id, kind=NodeKind.GROUP, text=label, position=(cx, cy),
            created_at=now)
        for mid in member_ids:
            canvas.groups[mid] = group_id
        return group_id

    def connect(self, canvas_id: CanvasId, source: NodeId, target: NodeId,
                label: str | None = None) -> EdgeId:
        canvas = self.canvas(canvas_id)
        self.node(canvas_id, source)
        self.node(canvas_id, target)
        if source == target:
            raise SelfLoop("edges must connect two distinct nodes")
        if canvas.edge_between(source, target) is not None:
            raise DuplicateEdge(f"edge ({source!r}, {target!r}) already exists")
        self._touch()
        edge_id = self._fresh_id("e")
        canvas.edges[edge_id] = Edge(id=edge_id, source=source, target=target,
                                     label=label)
        return edge_id

    # --- hierarchy operations -------------------------------------------------

    def semantic_dive(self, canvas_id: CanvasId, node_id: NodeId) -> CanvasId:
        """Turn a node into a portal and create its child canvas.

        Diving an existing portal is pure navigation: it returns the portal's
        target without mutating anything.
        """
        node = self.node(canvas_id, node_id)
        if node.kind is NodeKind.GROUP:
            raise UndivableKind("group nodes cannot be dived into")
        if node.kind is NodeKind.PORTAL:
            assert node.portal_target is not None
            return node.portal_target
        self._touch()
        child_id = self._fresh_id("c")
        self.canvases[child_id] = CanvasLayer(
            id=child_id, topic=node.text or PLACEHOLDER_TOPIC,
            topic_source=TopicSource.INHERITED_FROM_DIVE)
        self.hierarchy.attach(child_id, canvas_id)
        node.kind = NodeKind.PORTAL
        node.portal_target = child_id
        return child_id

    def add_canvas_above(self, roots_to_join: Iterable[CanvasId],
                         topic: str) -> CanvasId:
        """Create a broader-topic canvas above existing roots, merging their
        hierarchies into one."""
        joins = list(dict.fromkeys(roots_to_join))
        if not joins:
            raise EmptyJoinList("need at least one root to join")
        if not topic:
            raise EmptyTopic("broad topic must be nonempty")
        for cid in joins:
            self.canvas(cid)
            if cid not in self.roots:
                raise NotARoot(f"canvas {cid!r} is not a root")
        self._touch()
        new_id = self._fresh_id("c")
        self.canvases[new_id] = CanvasLayer(
            id=new_id, topic=topic, topic_source=TopicSource.USER_SET)
        insert_at = self.roots.index(joins[0])
        for cid in joins:
            self.roots.remove(cid)
            self.hierarchy.attach(cid, new_id)
        self.roots.insert(insert_at, new_id)
        return new_id

    def add_subtopic_canvas(self, parent_id: CanvasId, topic: str,
                            generated: bool = False) -> CanvasId:
        """Add a child canvas from the hierarchy view. No portal node is
        created; only dives make portals."""
        self.canvas(parent_id)
        if not topic:
            raise EmptyTopic("subtopic must be nonempty")
        self._touch()
        child_id = self._fresh_id("c")
        source = TopicSource.LLM_SUMMARIZED if generated else TopicSource.USER_SET
        self.canvases[child_id] = CanvasLayer(id=child_id, topic=topic,
                                              topic_source=source)
        self.hierarchy.attach(child_id, parent_id)
        return child_id

    def create_hierarchy(self, topic: str) -> CanvasId:
        """Start a new root canvas beside the existing hierarchies."""
        if not topic:
            raise EmptyTopic("hierarchy topic must be nonempty")
        self._touch()
        canvas_id = self._fresh_id("c")
        self.canvases[canvas_id] = CanvasLayer(
            id=canvas_id, topic=topic, topic_source=TopicSource.USER_SET)
        self.roots.append(canvas_id)
        return canvas_id

    def delete_canvas_branch(self, canvas_id: CanvasId) -> int:
        """Remove a canvas and all its descendants. Portals elsewhere whose
        target went away revert to plain Concept nodes. Returns the number of
        canvases removed."""
        self.canvas(canvas_id)
        doomed = self.hierarchy.descendants(canvas_id)
        if len(doomed) >= len(self.canvases):
            raise WouldEmptyWorkspace("deleting this branch would empty the workspace")
        self._touch()
        doomed_set = set(doomed)
        for cid in doomed:
            self.hierarchy.detach(cid)
            self.hierarchy.child_order.pop(cid, None)
            del self.canvases[cid]
        if canvas_id in self.roots:
            self.roots.remove(canvas_id)
        for canvas in self.canvases.values():
            for node in canvas.nodes.values():
                if node.kind is NodeKind.PORTAL and node.portal_target in doomed_set:
                    node.kind = NodeKind.CONCEPT
                    node.portal_target = None
        return len(doomed)

    def hierarchy_depth(self) -> int:
        """Number of hierarchical levels: longest root-to-leaf canvas chain."""
        return max(self.hierarchy.depth_below(r) for r in self.roots)

    # --- clipboard ------------------------------------------------------------

    def copy_subgraph(self, canvas_id: CanvasId,
                      node_ids: Iterable[NodeId]) -> ClipboardPayload:
        canvas = self.canvas(canvas_id)
        ids = list(dict.fromkeys(node_ids))
        if not ids:
            raise EmptySelection("nothing selected to copy")
        for nid in ids:
            self.node(canvas_id, nid)
        selected = set(ids)
        nodes = [canvas.nodes[nid].to_dict() for nid in ids]
        edges = [e.to_dict() for e in canvas.edges.values()
                 if e.source in selected and e.target in selected]
        groups = {m: g for m, g in canvas.groups.items()
                  if m in selected and g in selected}
        return ClipboardPayload(nodes=nodes, edges=edges, groups=groups)

    def paste_subgraph(self, canvas_id: CanvasId, payload: ClipboardPayload,
                       offset: tuple[float, float]) -> dict[NodeId, NodeId]:
        """Recreate the copied subgraph with fresh ids, translated by
        ``offset``. Portals paste as Concepts so the one-portal-per-canvas
        bijection survives."""
        canvas = self.canvas(canvas_id)
        copies = [Node.from_dict(nd) for nd in payload.nodes]
        now = self._touch()
        dx, dy = float(offset[0]), float(offset[1])
        mapping: dict[NodeId, NodeId] = {src.id: self._fresh_id("n") for src in copies}
        for src in copies:
            kind = NodeKind.CONCEPT if src.kind is NodeKind.PORTAL else src.kind
            provenance = src.provenance
            if (provenance.kind is ProvenanceKind.EXTRACTED
                    and provenance.source_node in mapping):
                provenance = Provenance.extracted(
                    mapping[provenance.source_node], provenance.span or (0, 0))
            canvas.nodes[mapping[src.id]] = Node(
                id=mapping[src.id], kind=kind, text=src.text,
                position=(src.position[0] + dx, src.position[1] + dy),
                size=src.size, portal_target=None, provenance=provenance,
                renditions={lv: Rendition(r.text, r.stale)
                            for lv, r in src.renditions.items()},
                created_at=now,
            )
        for edge_dict in payload.edges:
            src_edge = Edge.from_dict(edge_dict)
            if src_edge.source not in mapping or src_edge.target not in mapping:
                raise UnknownNode("clipboard edge references a node outside the payload")
            edge_id = self._fresh_id("e")
            canvas.edges[edge_id] = Edge(
                id=edge_id, source=mapping[src_edge.source],
                target=mapping[src_edge.target], label=src_edge.label)
        for member, group in payload.groups.items():
            if member not in mapping or group not in mapping:
                raise UnknownNode("clipboard group references a node outside the payload")
            canvas.groups[mapping[member]] = mapping[group]
        return mapping

    # --- topics ---------------------------------------------------------------

    def set_canvas_topic(self, canvas_id: CanvasId, topic: str,
                         source: TopicSource) -> None:
        """Replace a canvas topic. A user-set topic wins over later LLM
        summarization attempts."""
        canvas = self.canvas(canvas_id)
        if not topic:
            raise EmptyTopic("canvas topic must be nonempty")
        if (canvas.topic_source is TopicSource.USER_SET
                and source is TopicSource.LLM_SUMMARIZED):
            raise UserTopicLocked(f"canvas {canvas_id!r} topic is user-set")
        self._touch()
        canvas.topic = topic
        canvas.topic_source = source

    # --- renditions (stored via the lens; engine owns the state) --------------

    def store_rendition(self, canvas_id: CanvasId, node_id: NodeId,
                        level: SemanticLevel, text: str) -> None:
        node = self.node(canvas_id, node_id)
        node.renditions[level] = Rendition(text=text, stale=False)
        self._touch()

    # --- validation -------------------------------------------------------------

    def check_invariants(self) -> None:
        """Raise AssertionError when any structural invariant is violated.
        Used by property tests and after loading from disk."""
        assert self.canvases, "workspace must hold at least one canvas"
        referenced = set(self.hierarchy.parent_of) | set(self.hierarchy.parent_of.values())
        for cid in self.hierarchy.child_order:
            referenced.add(cid)
            referenced.update(self.hierarchy.child_order[cid])
        referenced.update(self.roots)
        unknown = referenced - set(self.canvases)
        assert not unknown, f"hierarchy references unknown canvases {unknown}"

        parentless = [c for c in self.canvases if c not in self.hierarchy.parent_of]
        assert sorted(self.roots) == sorted(parentless), (
            f"roots {self.roots} != parentless canvases {parentless}")
        assert len(set(self.roots)) == len(self.roots), "duplicate roots"

        for cid in self.canvases:
            seen = {cid}
            cur = cid
            while cur in self.hierarchy.parent_of:
                cur = self.hierarchy.parent_of[cur]
                assert cur not in seen, f"hierarchy cycle through {cur}"
                seen.add(cur)

        for parent, order in self.hierarchy.child_order.items():
            assert len(set(order)) == len(order), f"duplicate children under {parent}"
            actual = {c for c, p in self.hierarchy.parent_of.items() if p == parent}
            assert set(order) == actual, (
                f"child_order[{parent}] = {order} but parent_of says {actual}")
        for child, parent in self.hierarchy.parent_of.items():
            assert child in self.hierarchy.child_order.get(parent, []), (
                f"{child} missing from child_order[{parent}]")

        portal_targets: dict[CanvasId, NodeId] = {}
        for canvas in self.canvases.values():
            assert canvas.topic, f"canvas {canvas.id} has an empty topic"
            for edge in canvas.edges.values():
                assert edge.source in canvas.nodes and edge.target in canvas.nodes, (
                    f"edge {edge.id} endpoints not on canvas {canvas.id}")
                assert edge.source != edge.target, f"self-loop {edge.id}"
            pairs = [(e.source, e.target) for e in canvas.edges.values()]
            assert len(set(pairs)) == len(pairs), f"duplicate edge pair on {canvas.id}"
            for member, group in canvas.groups.items():
                assert member in canvas.nodes and group in canvas.nodes
                assert canvas.nodes[group].kind is NodeKind.GROUP
                assert canvas.nodes[member].kind is not NodeKind.GROUP, (
                    "nested group membership")
            for node in canvas.nodes.values():
                is_portal = node.kind is NodeKind.PORTAL
                assert is_portal == (node.portal_target is not None), (
                    f"portal flag/target mismatch on {node.id}")
                if is_portal:
                    target = node.portal_target
                    assert target in self.canvases, f"dangling portal {node.id}"
                    assert self.hierarchy.parent_of.get(target) == canvas.id, (
                        f"portal {node.id} target {target} is not a child of its canvas")
                    assert target not in portal_targets, (
                        f"two portals target {target}")
                    portal_targets[target] = node.id

    # --- serialization ------------------------------------------------------------

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "created_at": self.created_at,
            "modified_at": self.modified_at,
            "next_id": self.next_id,
            "roots": list(self.roots),
            "hierarchy": self.hierarchy.to_dict(),
            "canvases": {cid: c.to_dict() for cid, c in self.canvases.items()},
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any], clock: Clock = system_clock) -> "Workspace":
        _require_keys(d, {"id", "created_at", "modified_at", "next_id", "roots",
                          "hierarchy", "canvases"}, "workspace")
        try:
            return cls(
                id=d["id"],
                canvases={cid: CanvasLayer.from_dict(cd)
                          for cid, cd in d["canvases"].items()},
                hierarchy=Hierarchy.from_dict(d["hierarchy"]),
                roots=list(d["roots"]),
                created_at=int(d["created_at"]),
                modified_at=int(d["modified_at"]),
                next_id=int(d["next_id"]),
                clock=clock,
            )
        except CorruptFile:
            raise
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise CorruptFile(f"malformed workspace record: {exc}") from exc


def radial_positions(center: tuple[float, float], radius: float,
                     count: int) -> list[tuple[float, float]]:
    """Evenly spaced points on a circle, starting straight above the center.
    Used to fan generated subtopics around their source node."""
    out = []
    for i in range(count):
        angle = -math.pi / 2 + 2 * math.pi * i / max(count, 1)
        out.append((center[0] + radius * math.cos(angle),
                    center[1] + radius * math.sin(angle)))
    return out
