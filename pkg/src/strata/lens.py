"""Semantic lens: maps zoom magnification to a detail level and manages
lazy, cached generation of per-node renditions through the gateway.

The ALL level is always the node's own text and never costs a provider
call. LINES, SUMMARY, and KEYWORDS are generated on first request, cached
on the node, and served until the node's text changes.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

from .errors import NonpositiveZoom
from .llm.gateway import Gateway
from .llm.templates import TemplateKind
from .model import NodeId, SemanticLevel
from .workspace import Workspace

# Re-exported: the level enum lives with the node model because renditions
# are stored there, but it is conceptually part of the lens.
__all__ = ["LensMode", "LensThresholds", "SemanticLens", "SemanticLevel",
           "generate_rendition", "level_for_zoom", "split_segments"]


@dataclass(frozen=True)
class LensMode:
    """Auto follows zoom; Pinned shows one level regardless of zoom."""

    pinned: SemanticLevel | None = None

    @classmethod
    def auto(cls) -> "LensMode":
        return cls(None)

    @classmethod
    def pin(cls, level: SemanticLevel) -> "LensMode":
        return cls(level)


AUTO = LensMode.auto()


@dataclass(frozen=True)
class LensThresholds:
    """Zoom cutoffs for Auto mode: >= all_min shows full text, >= summary_min
    shows summaries, anything below shows keywords. LINES never appears in
    Auto; it is reachable only by pinning."""

    all_min: float = 0.75
    summary_min: float = 0.35


def level_for_zoom(zoom: float, mode: LensMode = AUTO,
                   thresholds: LensThresholds = LensThresholds()) -> SemanticLevel:
    if zoom <= 0:
        raise NonpositiveZoom(f"zoom must be > 0, got {zoom}")
    if mode.pinned is not None:
        return mode.pinned
    if zoom >= thresholds.all_min:
        return SemanticLevel.ALL
    if zoom >= thresholds.summary_min:
        return SemanticLevel.SUMMARY
    return SemanticLevel.KEYWORDS


_LIST_ITEM_PREFIXES = ("-", "•", "*")


def _is_list_item(line: str) -> bool:
    stripped = line.lstrip()
    if stripped.startswith(_LIST_ITEM_PREFIXES):
        return True
    head = stripped.split(".", 1)[0]
    return head.isdigit() and "." in stripped


def split_segments(text: str) -> list[str]:
    """Split text into the units the LINES level compresses one by one:
    paragraphs (separated by blank lines) and individual list items."""
    segments: list[str] = []
    paragraph: list[str] = []

    def flush():
        if paragraph:
            segments.append("\n".join(paragraph))
            paragraph.clear()

    for line in text.splitlines():
        if not line.strip():
            flush()
        elif _is_list_item(line):
            flush()
            segments.append(line.strip())
        else:
            paragraph.append(line)
    flush()
    return segments


_LEVEL_TEMPLATE = {
    SemanticLevel.SUMMARY: TemplateKind.ZOOM_SUMMARY,
    SemanticLevel.KEYWORDS: TemplateKind.ZOOM_KEYWORDS,
}


def generate_rendition(gateway: Gateway, text: str, level: SemanticLevel) -> str:
    """Produce the derived text for one level. LINES compresses each
    paragraph or list item separately and joins the results in order."""
    if level is SemanticLevel.LINES:
        compressed = []
        for segment in split_segments(text):
            stream = gateway.complete_template(TemplateKind.ZOOM_LINES,
                                               {"line": segment})
            compressed.append(stream.drain())
        return "\n".join(compressed)
    stream = gateway.complete_template(_LEVEL_TEMPLATE[level], {"text": text})
    return stream.drain()


class SemanticLens:
    """Rendition access with per-(node, level) single-flight generation."""

    def __init__(self, gateway: Gateway, thresholds: LensThresholds | None = None):
        self.gateway = gateway
        self.thresholds = thresholds or LensThresholds()
        self._flights: dict[tuple[NodeId, SemanticLevel], threading.Lock] = {}
        self._flights_guard = threading.Lock()

    def level_for_zoom(self, zoom: float, mode: LensMode = AUTO) -> SemanticLevel:
        return level_for_zoom(zoom, mode, self.thresholds)

    def get_rendition(self, workspace: Workspace, node_id: NodeId,
                      level: SemanticLevel) -> str:
        canvas_id, node = workspace.find_node(node_id)
        if level is SemanticLevel.ALL:
            return node.text
        with self.flight_lock(node_id, level):
            cached = node.fresh_rendition(level)
            if cached is not None:
                return cached.text
            text = generate_rendition(self.gateway, node.text, level)
            workspace.store_rendition(canvas_id, node_id, level, text)
            return text

    def invalidate(self, workspace: Workspace, node_id: NodeId) -> None:
        _, node = workspace.find_node(node_id)
        node.invalidate_renditions()

    def flight_lock(self, node_id: NodeId, level: SemanticLevel) -> threading.Lock:
        with self._flights_guard:
            return self._flights.setdefault((node_id, level), threading.Lock())
