"""Append-only session event log and the exploration/sensemaking measures
computed over a workspace plus its log."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Iterable

from .errors import CorruptFile, EmptyGlossary
from .workspace import Workspace


class EventKind(str, Enum):
    PROMPT_ISSUED = "prompt_issued"          # data: template_kind, node
    NODE_CREATED = "node_created"            # data: node, kind
    EDGE_CREATED = "edge_created"            # data: edge
    CANVAS_CREATED = "canvas_created"        # data: canvas, via
    CANVAS_VISITED = "canvas_visited"        # data: canvas
    NODE_REVISITED = "node_revisited"        # data: node, via
    TEXT_EXTRACTED = "text_extracted"        # data: source, new_node
    GROUP_CREATED = "group_created"          # data: group


class CanvasOrigin(str, Enum):
    DIVE = "dive"
    HIERARCHY_VIEW = "hierarchy_view"
    NEW_HIERARCHY = "new_hierarchy"
    BROAD_TOPIC = "broad_topic"


class RevisitKind(str, Enum):
    SCROLL_READ = "scroll_read"
    EDIT = "edit"


@dataclass(frozen=True)
class SessionEvent:
    seq: int
    at: int
    kind: EventKind
    data: dict[str, Any]

    def to_dict(self) -> dict[str, Any]:
        return {"seq": self.seq, "at": self.at, "kind": self.kind.value,
                "data": self.data}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "SessionEvent":
        try:
            return cls(seq=int(d["seq"]), at=int(d["at"]),
                       kind=EventKind(d["kind"]), data=dict(d["data"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise CorruptFile(f"malformed session event: {exc}") from exc


class SessionLog:
    """Strictly ordered, gap-free event history. Append is the only
    mutation; recorded events are never rewritten."""

    def __init__(self, events: Iterable[SessionEvent] = ()):
        self._events: list[SessionEvent] = list(events)

    def record(self, kind: EventKind, data: dict[str, Any], at: int) -> int:
        seq = len(self._events) + 1
        self._events.append(SessionEvent(seq=seq, at=at, kind=kind, data=data))
        return seq

    @property
    def events(self) -> tuple[SessionEvent, ...]:
        return tuple(self._events)

    def __len__(self) -> int:
        return len(self._events)

    # --- ndjson persistence --------------------------------------------------

    def dump_lines(self) -> str:
        return "".join(json.dumps(e.to_dict(), sort_keys=True) + "\n"
                       for e in self._events)

    @classmethod
    def from_lines(cls, text: str) -> "SessionLog":
        events = [SessionEvent.from_dict(json.loads(line))
                  for line in text.splitlines() if line.strip()]
        return cls(events)

    @classmethod
    def load(cls, path: str | Path) -> "SessionLog":
        p = Path(path)
        if not p.exists():
            return cls()
        return cls.from_lines(p.read_text(encoding="utf-8"))


@dataclass
class MetricsReport:
    prompts: int
    nodes: int
    connections: int
    concepts: int
    hierarchy_levels: int
    revisits: int

    def to_dict(self) -> dict[str, int]:
        return {
            "prompts": self.prompts,
            "nodes": self.nodes,
            "connections": self.connections,
            "concepts": self.concepts,
            "hierarchy_levels": self.hierarchy_levels,
            "revisits": self.revisits,
        }


# --- concept matching ---------------------------------------------------------

_TOKEN = re.compile(r"[0-9a-z']+")


def _tokens(text: str) -> list[str]:
    return _TOKEN.findall(text.lower())


def _tokens_equal(a: str, b: str) -> bool:
    # fold trivial plural suffixes both ways; glossaries list exact variants
    # when this is too coarse
    return (a == b or a == b + "s" or a == b + "es"
            or b == a + "s" or b == a + "es")


def count_concepts(workspace: Workspace, glossary: Iterable[str]) -> int:
    """Number of unique glossary terms appearing in the workspace (node
    texts and canvas topics), matched case-insensitively as contiguous token
    sequences with plural folding. Each term counts at most once."""
    terms = [t for t in glossary if t.strip()]
    if not terms:
        raise EmptyGlossary("glossary has no terms")
    texts: list[list[str]] = []
    for canvas in workspace.canvases.values():
        texts.append(_tokens(canvas.topic))
        for node in canvas.nodes.values():
            texts.append(_tokens(node.text))
    count = 0
    for term in terms:
        term_tokens = _tokens(term)
        if term_tokens and any(_contains(toks, term_tokens) for toks in texts):
            count += 1
    return count


def _contains(haystack: list[str], needle: list[str]) -> bool:
    n = len(needle)
    for i in range(len(haystack) - n + 1):
        if all(_tokens_equal(haystack[i + j], needle[j]) for j in range(n)):
            return True
    return False


# --- measures -----------------------------------------------------------------

def count_revisits(log: SessionLog) -> int:
    """Revisits are NodeRevisited events only; switching between canvases
    (CanvasVisited) does not count."""
    return sum(1 for e in log.events if e.kind is EventKind.NODE_REVISITED)


def compute_metrics(workspace: Workspace, log: SessionLog,
                    glossary: Iterable[str]) -> MetricsReport:
    prompts = nodes = connections = 0
    for event in log.events:
        if event.kind is EventKind.PROMPT_ISSUED:
            prompts += 1
        elif event.kind is EventKind.NODE_CREATED:
            nodes += 1
        elif event.kind is EventKind.EDGE_CREATED:
            connections += 1
    return MetricsReport(
        prompts=prompts,
        nodes=nodes,
        connections=connections,
        concepts=count_concepts(workspace, glossary),
        hierarchy_levels=workspace.hierarchy_depth(),
        revisits=count_revisits(log),
    )


# --- glossary files -------------------------------------------------------------

def load_glossary(path: str | Path) -> list[str]:
    """Newline-separated terms; '#' starts a comment; blank lines ignored."""
    terms = []
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        term = raw.split("#", 1)[0].strip()
        if term:
            terms.append(term)
    return terms
