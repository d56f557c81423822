"""Exploration orchestration: expand-bar actions, dives with subtopic
population, rendition fetches, and canvas topic re-summarization.

Provider streams run outside the workspace lock; only their effects (node
creation, final text) enter the owning workspace's mutation path.
"""

from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

from ..analytics import EventKind
from ..errors import EmptyText, ProviderError, StrataError, UserTopicLocked
from ..lens import SemanticLens, generate_rendition
from ..llm.gateway import Gateway, build_canvas_digest
from ..llm.templates import Route, TemplateKind, render_template
from ..model import NodeId, NodeKind, Provenance, SemanticLevel, TopicSource
from ..workspace import radial_positions
from .config import ServiceConfig
from .store import WorkspaceSession, WorkspaceStore


class ExpandAction(str, Enum):
    PROMPT = "prompt"
    EXPLAIN = "explain"
    QUESTIONS = "questions"
    SUBTOPICS = "subtopics"


_ACTION_TEMPLATE = {
    ExpandAction.PROMPT: TemplateKind.RAW_PROMPT,
    ExpandAction.EXPLAIN: TemplateKind.EXPLAIN,
    ExpandAction.QUESTIONS: TemplateKind.QUESTIONS,
    ExpandAction.SUBTOPICS: TemplateKind.SUBTOPICS,
}


@dataclass
class ExpandResult:
    nodes: list[NodeId]
    incomplete: bool = False
    warning: str | None = None


@dataclass
class DiveResult:
    canvas: str
    created: bool
    warning: str | None = None


class Orchestrator:
    def __init__(self, store: WorkspaceStore, gateway: Gateway,
                 config: ServiceConfig):
        self.store = store
        self.gateway = gateway
        self.config = config
        self.lens = SemanticLens(gateway, config.lens)
        self._executor = ThreadPoolExecutor(max_workers=4,
                                            thread_name_prefix="strata-bg")
        self._resummarize_timers: dict[tuple[str, str], threading.Timer] = {}
        self._timer_lock = threading.Lock()

    # --- expand bar -------------------------------------------------------

    def expand(self, workspace_id: str, node_id: NodeId,
               action: ExpandAction) -> ExpandResult:
        session = self.store.get(workspace_id)
        with session.lock:
            canvas_id, node = session.workspace.find_node(node_id)
            if not node.text.strip():
                raise EmptyText("expand needs a node with text")
            source_text = node.text
            position = node.position
        kind = _ACTION_TEMPLATE[action]
        self.store.record_event(session, EventKind.PROMPT_ISSUED,
                                {"template_kind": kind.value, "node": node_id})
        if action in (ExpandAction.PROMPT, ExpandAction.EXPLAIN):
            result = self._stream_response(session, canvas_id, node_id,
                                           source_text, kind, position)
        elif action is ExpandAction.QUESTIONS:
            result = self._questions(session, canvas_id, source_text, position)
        else:
            result = self._subtopics(session, canvas_id, source_text, position)
        self._schedule_resummarize(session, canvas_id)
        return result

    def _stream_response(self, session: WorkspaceSession, canvas_id: str,
                         source_id: NodeId, text: str, kind: TemplateKind,
                         position: tuple[float, float]) -> ExpandResult:
        prompt = render_template(kind, {"text": text})
        below = (position[0], position[1] + self.config.layout.response_gap)
        response_id = self.store.apply(session.workspace.id, "create_node", {
            "canvas": canvas_id, "kind": NodeKind.RESPONSE.value, "text": "",
            "position": list(below),
            "provenance": Provenance.llm_generated().to_dict(),
        })
        route = Route.CHAT if kind is TemplateKind.RAW_PROMPT else Route.STRUCTURED
        stream = self.gateway.complete(prompt, route, kind=kind)
        for chunk in stream:
            session.bus.publish({"type": "chunk", "node": response_id,
                                 "text": chunk})
        if stream.text:
            self.store.apply(session.workspace.id, "set_node_text", {
                "canvas": canvas_id, "node": response_id, "text": stream.text})
        if stream.error is not None:
            session.bus.publish({"type": "stream_error", "node": response_id,
                                 "error": stream.error.code,
                                 "message": str(stream.error)})
            return ExpandResult(nodes=[response_id], incomplete=True,
                                warning=str(stream.error))
        session.bus.publish({"type": "stream_end", "node": response_id})
        return ExpandResult(nodes=[response_id])

    def _questions(self, session: WorkspaceSession, canvas_id: str, text: str,
                   position: tuple[float, float]) -> ExpandResult:
        questions = self.gateway.generate_questions(text)
        below = (position[0], position[1] + self.config.layout.response_gap)
        node_id = self.store.apply(session.workspace.id, "create_node", {
            "canvas": canvas_id, "kind": NodeKind.QUESTION.value,
            "text": "\n".join(q.text for q in questions),
            "position": list(below),
            "provenance": Provenance.llm_generated().to_dict(),
        })
        return ExpandResult(nodes=[node_id])

    def _subtopics(self, session: WorkspaceSession, canvas_id: str, text: str,
                   position: tuple[float, float]) -> ExpandResult:
        generated = self.gateway.generate_subtopics(
            text, count=self.config.dive_subtopics, margin=0)
        spots = radial_positions(position, self.config.layout.subtopic_radius,
                                 len(generated.items))
        created = []
        for topic, spot in zip(generated.items, spots):
            created.append(self.store.apply(session.workspace.id, "create_node", {
                "canvas": canvas_id, "kind": NodeKind.CONCEPT.value,
                "text": topic, "position": list(spot),
                "provenance": Provenance.llm_generated().to_dict(),
            }))
        return ExpandResult(nodes=created, warning=generated.warning)

    # --- semantic dive ---------------------------------------------------------

    def dive(self, workspace_id: str, node_id: NodeId) -> DiveResult:
        session = self.store.get(workspace_id)
        with session.lock:
            canvas_id, node = session.workspace.find_node(node_id)
            already_portal = node.kind is NodeKind.PORTAL
        child_id = self.store.apply(workspace_id, "semantic_dive",
                                    {"canvas": canvas_id, "node": node_id})
        if already_portal:
            return DiveResult(canvas=child_id, created=False)
        if self.config.populate_on_dive:
            self._run_background(self._populate_canvas, session, child_id)
        return DiveResult(canvas=child_id, created=True)

    def _populate_canvas(self, session: WorkspaceSession, canvas_id: str) -> None:
        try:
            with session.lock:
                topic = session.workspace.canvas(canvas_id).topic
            generated = self.gateway.generate_subtopics(
                topic, count=self.config.dive_subtopics, margin=0)
            spots = radial_positions((0.0, 0.0),
                                     self.config.layout.subtopic_radius,
                                     len(generated.items))
            for subtopic, spot in zip(generated.items, spots):
                self.store.apply(session.workspace.id, "create_node", {
                    "canvas": canvas_id, "kind": NodeKind.CONCEPT.value,
                    "text": subtopic, "position": list(spot),
                    "provenance": Provenance.llm_generated().to_dict(),
                })
        except StrataError as exc:
            session.bus.publish({"type": "warning", "canvas": canvas_id,
                                 "error": exc.code,
                                 "message": f"subtopic generation failed: {exc}"})

    # --- renditions ----------------------------------------------------------------

    def rendition(self, workspace_id: str, node_id: NodeId,
                  level: SemanticLevel) -> str:
        session = self.store.get(workspace_id)
        with session.lock:
            canvas_id, node = session.workspace.find_node(node_id)
            if level is SemanticLevel.ALL:
                return node.text
            cached = node.fresh_rendition(level)
            if cached is not None:
                return cached.text
            text = node.text
        with self.lens.flight_lock(node_id, level):
            with session.lock:
                cached = session.workspace.find_node(node_id)[1] \
                    .fresh_rendition(level)
                if cached is not None:
                    return cached.text
            rendered = generate_rendition(self.gateway, text, level)
            self.store.apply(workspace_id, "store_rendition", {
                "canvas": canvas_id, "node": node_id, "level": level.value,
                "text": rendered})
            return rendered

    # --- topic re-summarization ---------------------------------------------------

    def _schedule_resummarize(self, session: WorkspaceSession,
                              canvas_id: str) -> None:
        delay = self.config.resummarize_delay_s
        if delay is None:
            return
        with session.lock:
            canvas = session.workspace.canvases.get(canvas_id)
            if canvas is None or canvas.topic_source is TopicSource.USER_SET:
                return
        if self.config.sync_background or delay <= 0:
            self._resummarize(session, canvas_id)
            return
        key = (session.workspace.id, canvas_id)
        with self._timer_lock:
            timer = self._resummarize_timers.get(key)
            if timer is not None:
                timer.cancel()
            timer = threading.Timer(delay, self._resummarize,
                                    args=(session, canvas_id))
            timer.daemon = True
            self._resummarize_timers[key] = timer
            timer.start()

    def _resummarize(self, session: WorkspaceSession, canvas_id: str) -> None:
        try:
            with session.lock:
                canvas = session.workspace.canvases.get(canvas_id)
                if canvas is None or canvas.topic_source is TopicSource.USER_SET:
                    return
                digest = build_canvas_digest(canvas)
            if not digest:
                return
            topic = self.gateway.summarize_canvas_topic(digest)
            if not topic:
                return
            self.store.apply(session.workspace.id, "set_canvas_topic", {
                "canvas": canvas_id, "topic": topic,
                "source": TopicSource.LLM_SUMMARIZED.value})
        except (UserTopicLocked, ProviderError) as exc:
            session.bus.publish({"type": "warning", "canvas": canvas_id,
                                 "error": exc.code,
                                 "message": f"topic summarization skipped: {exc}"})

    # --- plumbing --------------------------------------------------------------------

    def _run_background(self, fn, *args) -> None:
        if self.config.sync_background:
            fn(*args)
        else:
            self._executor.submit(fn, *args)

    def close(self) -> None:
        with self._timer_lock:
            for timer in self._resummarize_timers.values():
                timer.cancel()
            self._resummarize_timers.clear()
        self._executor.shutdown(wait=False)
