"""HTTP surface: REST mutations, rendition/metrics reads, and the per-
workspace server-sent-events push channel."""

from __future__ import annotations

from contextlib import asynccontextmanager

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse, StreamingResponse
from pydantic import BaseModel

from ..analytics import EventKind, RevisitKind, compute_metrics, load_glossary
from ..clock import Clock, system_clock
from ..errors import EmptyGlossary, EmptySelection, StrataError
from ..lens import AUTO
from ..llm.gateway import Gateway
from ..llm.mock import MockProvider, default_fixtures_dir
from ..llm.provider import HttpProvider
from ..model import NodeKind, Provenance, SemanticLevel, TopicSource
from ..workspace import ClipboardPayload
from .config import ServiceConfig
from .demo import seed_demo
from .orchestrator import ExpandAction, Orchestrator
from .store import WorkspaceStore


# --- request bodies ----------------------------------------------------------

class CreateWorkspaceBody(BaseModel):
    topic: str | None = None
    id: str | None = None


class CreateCanvasBody(BaseModel):
    topic: str = ""
    parent: str | None = None
    source: str = "custom"
    join_roots: list[str] | None = None


class PatchCanvasBody(BaseModel):
    topic: str
    source: TopicSource = TopicSource.USER_SET


class CreateNodeBody(BaseModel):
    kind: NodeKind = NodeKind.CONCEPT
    text: str = ""
    position: tuple[float, float] = (0.0, 0.0)


class PatchNodeBody(BaseModel):
    text: str | None = None
    position: tuple[float, float] | None = None


class ExpandBody(BaseModel):
    action: ExpandAction


class ExtractBody(BaseModel):
    span: tuple[int, int]
    position: tuple[float, float] = (0.0, 0.0)


class EdgeBody(BaseModel):
    source: str
    target: str
    label: str | None = None


class GroupBody(BaseModel):
    members: list[str]
    label: str


class CopyBody(BaseModel):
    canvas: str
    nodes: list[str]


class PasteBody(BaseModel):
    canvas: str
    payload: dict
    offset: tuple[float, float] = (0.0, 0.0)


class RevisitBody(BaseModel):
    via: RevisitKind = RevisitKind.SCROLL_READ


def build_provider(config: ServiceConfig):
    if config.mock_llm:
        provider = MockProvider()
        provider.load_dir(config.mock_fixtures_dir or default_fixtures_dir())
        return provider
    return HttpProvider(config.provider)


def create_app(config: ServiceConfig, provider=None,
               clock_factory=None, event_clock: Clock = system_clock) -> FastAPI:
    config.validate()
    if provider is None:
        provider = build_provider(config)
    gateway = Gateway(provider, config.provider)
    store = WorkspaceStore(config, clock_factory=clock_factory,
                           event_clock=event_clock)
    orchestrator = Orchestrator(store, gateway, config)
    if config.demo:
        seed_demo(store, gateway)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        yield
        orchestrator.close()
        store.flush()
        if hasattr(provider, "close"):
            provider.close()

    app = FastAPI(title="strata", lifespan=lifespan)
    app.state.store = store
    app.state.orchestrator = orchestrator
    app.state.gateway = gateway
    app.state.provider = provider
    app.state.config = config

    @app.exception_handler(StrataError)
    async def strata_error_handler(request: Request, exc: StrataError):
        body = {"error": {"code": exc.code, "message": str(exc)}}
        if exc.details:
            body["error"]["details"] = exc.details
        return JSONResponse(status_code=exc.http_status, content=body)

    # --- workspaces ---------------------------------------------------------

    @app.get("/healthz")
    def healthz():
        return {"ok": True}

    @app.get("/workspaces")
    def list_workspaces():
        out = []
        for ws_id in store.list_ids():
            session = store.get(ws_id)
            with session.lock:
                ws = session.workspace
                out.append({
                    "id": ws.id,
                    "roots": list(ws.roots),
                    "canvases": len(ws.canvases),
                    "hierarchy_depth": ws.hierarchy_depth(),
                    "modified_at": ws.modified_at,
                })
        return {"workspaces": out}

    @app.post("/workspaces", status_code=201)
    def create_workspace(body: CreateWorkspaceBody):
        session = store.create_workspace(body.topic, body.id)
        with session.lock:
            return session.workspace.to_dict()

    @app.get("/workspaces/{ws_id}")
    def get_workspace(ws_id: str):
        session = store.get(ws_id)
        with session.lock:
            return session.workspace.to_dict()

    # --- canvases ------------------------------------------------------------

    @app.post("/workspaces/{ws_id}/canvases", status_code=201)
    def create_canvas(ws_id: str, body: CreateCanvasBody):
        if body.join_roots is not None:
            canvas_id = store.apply(ws_id, "add_canvas_above",
                                    {"roots": body.join_roots, "topic": body.topic})
        elif body.parent is not None:
            generated = body.source == "generated"
            topic = body.topic
            if generated and not topic:
                session = store.get(ws_id)
                with session.lock:
                    context = session.workspace.canvas(body.parent).topic
                topic = next(iter(gateway.generate_subtopics(context, 1).items),
                             "").strip()
            canvas_id = store.apply(ws_id, "add_subtopic_canvas", {
                "parent": body.parent, "topic": topic, "generated": generated})
        else:
            canvas_id = store.apply(ws_id, "create_hierarchy",
                                    {"topic": body.topic})
        return {"canvas": canvas_id}

    @app.delete("/workspaces/{ws_id}/canvases/{canvas_id}")
    def delete_canvas(ws_id: str, canvas_id: str):
        removed = store.apply(ws_id, "delete_canvas_branch", {"canvas": canvas_id})
        return {"removed": removed}

    @app.patch("/workspaces/{ws_id}/canvases/{canvas_id}")
    def rename_canvas(ws_id: str, canvas_id: str, body: PatchCanvasBody):
        store.apply(ws_id, "set_canvas_topic", {
            "canvas": canvas_id, "topic": body.topic, "source": body.source.value})
        return {"canvas": canvas_id, "topic": body.topic}

    @app.post("/workspaces/{ws_id}/canvases/{canvas_id}/visit")
    def visit_canvas(ws_id: str, canvas_id: str):
        session = store.get(ws_id)
        with session.lock:
            session.workspace.canvas(canvas_id)
        seq = store.record_event(session, EventKind.CANVAS_VISITED,
                                 {"canvas": canvas_id})
        return {"seq": seq}

    # --- nodes ------------------------------------------------------------------

    @app.post("/workspaces/{ws_id}/canvases/{canvas_id}/nodes", status_code=201)
    def create_node(ws_id: str, canvas_id: str, body: CreateNodeBody):
        node_id = store.apply(ws_id, "create_node", {
            "canvas": canvas_id, "kind": body.kind.value, "text": body.text,
            "position": list(body.position),
            "provenance": Provenance.user_typed().to_dict()})
        return {"node": node_id}

    @app.patch("/workspaces/{ws_id}/nodes/{node_id}")
    def patch_node(ws_id: str, node_id: str, body: PatchNodeBody):
        session = store.get(ws_id)
        with session.lock:
            canvas_id, _ = session.workspace.find_node(node_id)
        if body.text is not None:
            store.apply(ws_id, "set_node_text", {
                "canvas": canvas_id, "node": node_id, "text": body.text})
        if body.position is not None:
            store.apply(ws_id, "move_node", {
                "canvas": canvas_id, "node": node_id,
                "position": list(body.position)})
        return {"node": node_id}

    @app.post("/workspaces/{ws_id}/nodes/{node_id}/expand")
    def expand_node(ws_id: str, node_id: str, body: ExpandBody):
        result = orchestrator.expand(ws_id, node_id, body.action)
        return {"nodes": result.nodes, "incomplete": result.incomplete,
                "warning": result.warning}

    @app.post("/workspaces/{ws_id}/nodes/{node_id}/dive")
    def dive_node(ws_id: str, node_id: str):
        result = orchestrator.dive(ws_id, node_id)
        return {"canvas": result.canvas, "created": result.created}

    @app.post("/workspaces/{ws_id}/nodes/{node_id}/extract", status_code=201)
    def extract_node(ws_id: str, node_id: str, body: ExtractBody):
        session = store.get(ws_id)
        with session.lock:
            canvas_id, _ = session.workspace.find_node(node_id)
        new_id = store.apply(ws_id, "extract_text", {
            "canvas": canvas_id, "source": node_id, "span": list(body.span),
            "position": list(body.position)})
        return {"node": new_id}

    @app.post("/workspaces/{ws_id}/nodes/{node_id}/revisit")
    def revisit_node(ws_id: str, node_id: str, body: RevisitBody):
        session = store.get(ws_id)
        with session.lock:
            session.workspace.find_node(node_id)
        seq = store.record_event(session, EventKind.NODE_REVISITED,
                                 {"node": node_id, "via": body.via.value})
        return {"seq": seq}

    @app.get("/workspaces/{ws_id}/nodes/{node_id}/rendition")
    def node_rendition(ws_id: str, node_id: str,
                       level: SemanticLevel = Query(SemanticLevel.ALL),
                       zoom: float | None = Query(None)):
        if zoom is not None:
            level = orchestrator.lens.level_for_zoom(zoom, AUTO)
        text = orchestrator.rendition(ws_id, node_id, level)
        return {"node": node_id, "level": level.value, "text": text}

    # --- edges and groups ----------------------------------------------------------

    @app.post("/workspaces/{ws_id}/edges", status_code=201)
    def create_edge(ws_id: str, body: EdgeBody):
        session = store.get(ws_id)
        with session.lock:
            canvas_id, _ = session.workspace.find_node(body.source)
        edge_id = store.apply(ws_id, "connect", {
            "canvas": canvas_id, "source": body.source, "target": body.target,
            "label": body.label})
        return {"edge": edge_id}

    @app.post("/workspaces/{ws_id}/groups", status_code=201)
    def create_group(ws_id: str, body: GroupBody):
        session = store.get(ws_id)
        if not body.members:
            raise EmptySelection("a group needs at least one member")
        with session.lock:
            canvas_id, _ = session.workspace.find_node(body.members[0])
        group_id = store.apply(ws_id, "group_nodes", {
            "canvas": canvas_id, "members": body.members, "label": body.label})
        return {"group": group_id}

    # --- clipboard --------------------------------------------------------------------

    @app.post("/workspaces/{ws_id}/clipboard/copy")
    def clipboard_copy(ws_id: str, body: CopyBody):
        session = store.get(ws_id)
        with session.lock:
            payload = session.workspace.copy_subgraph(body.canvas, body.nodes)
        return {"payload": payload.to_dict()}

    @app.post("/workspaces/{ws_id}/clipboard/paste")
    def clipboard_paste(ws_id: str, body: PasteBody):
        ClipboardPayload.from_dict(body.payload)  # validate shape up front
        mapping = store.apply(ws_id, "paste_subgraph", {
            "canvas": body.canvas, "payload": body.payload,
            "offset": list(body.offset)})
        return {"mapping": mapping}

    # --- analytics ----------------------------------------------------------------------

    @app.get("/workspaces/{ws_id}/metrics")
    def metrics(ws_id: str, glossary: str | None = Query(None)):
        path = glossary or config.glossary_path
        if not path:
            raise EmptyGlossary("no glossary file configured or passed")
        terms = load_glossary(path)
        session = store.get(ws_id)
        with session.lock:
            report = compute_metrics(session.workspace, session.session_log,
                                     terms)
        return report.to_dict()

    # --- push channel ---------------------------------------------------------------------

    @app.get("/workspaces/{ws_id}/events")
    def events(ws_id: str):
        session = store.get(ws_id)
        subscription = session.bus.subscribe()
        return StreamingResponse(subscription.sse_lines(poll_s=0.25),
                                 media_type="text/event-stream")

    return app
