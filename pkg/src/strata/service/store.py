"""Workspace sessions: the sole owner of workspace mutation.

Every mutation flows through :meth:`WorkspaceStore.apply`, which serializes
writers per workspace and does the bookkeeping in one place: append to the
mutation log (replay), emit analytics events (metrics), publish a push
record (UI), and schedule the debounced autosave.
"""

from __future__ import annotations

import json
import threading
from pathlib import Path
from typing import Any, Callable

from ..analytics import CanvasOrigin, EventKind, RevisitKind, SessionLog
from ..clock import Clock, system_clock
from ..errors import UnknownWorkspace
from ..model import NodeKind
from ..workspace import Workspace
from .config import ServiceConfig
from .events import EventBus
from .persistence import load_workspace, save_workspace
from .replay import CREATE_WORKSPACE, MutationLog, apply_mutation

WORKSPACE_FILE = "workspace.json"
SESSION_LOG_FILE = "session.ndjson"
MUTATION_LOG_FILE = "mutations.ndjson"

_CANVAS_EVENT_VIA = {
    "add_canvas_above": CanvasOrigin.BROAD_TOPIC,
    "add_subtopic_canvas": CanvasOrigin.HIERARCHY_VIEW,
    "create_hierarchy": CanvasOrigin.NEW_HIERARCHY,
    "semantic_dive": CanvasOrigin.DIVE,
}


class WorkspaceSession:
    def __init__(self, workspace: Workspace, directory: Path,
                 session_log: SessionLog, mutation_log: MutationLog):
        self.workspace = workspace
        self.directory = directory
        self.session_log = session_log
        self.mutation_log = mutation_log
        self.lock = threading.RLock()
        self.bus = EventBus()
        self.dirty = False
        self.saves_performed = 0
        self._autosave_timer: threading.Timer | None = None

    @property
    def workspace_path(self) -> Path:
        return self.directory / WORKSPACE_FILE


class WorkspaceStore:
    def __init__(self, config: ServiceConfig,
                 clock_factory: Callable[[], Clock] | None = None,
                 event_clock: Clock = system_clock):
        self.config = config
        self.data_dir = Path(config.data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self._clock_factory = clock_factory or (lambda: system_clock)
        self._event_clock = event_clock
        self._sessions: dict[str, WorkspaceSession] = {}
        self._lock = threading.Lock()

    # --- session lifecycle -----------------------------------------------

    def list_ids(self) -> list[str]:
        on_disk = {p.parent.name for p in self.data_dir.glob(f"*/{WORKSPACE_FILE}")}
        with self._lock:
            return sorted(on_disk | set(self._sessions))

    def create_workspace(self, topic: str | None = None,
                         workspace_id: str | None = None) -> WorkspaceSession:
        with self._lock:
            if workspace_id is None:
                taken = {p.name for p in self.data_dir.iterdir() if p.is_dir()}
                taken.update(self._sessions)
                n = 1
                while f"ws-{n}" in taken:
                    n += 1
                workspace_id = f"ws-{n}"
            workspace = Workspace.new(workspace_id, topic,
                                      clock=self._clock_factory())
            session = WorkspaceSession(
                workspace=workspace,
                directory=self.data_dir / workspace_id,
                session_log=SessionLog(),
                mutation_log=MutationLog(),
            )
            self._sessions[workspace_id] = session
        record = session.mutation_log.append(
            CREATE_WORKSPACE, {"id": workspace_id, "topic": topic},
            None, workspace.created_at)
        session.directory.mkdir(parents=True, exist_ok=True)
        self._append_line(session.directory / MUTATION_LOG_FILE, record.to_dict())
        session.dirty = True
        self._schedule_autosave(session)
        return session

    def get(self, workspace_id: str) -> WorkspaceSession:
        with self._lock:
            if workspace_id in self._sessions:
                return self._sessions[workspace_id]
            directory = self.data_dir / workspace_id
            path = directory / WORKSPACE_FILE
            if not path.exists():
                raise UnknownWorkspace(f"no workspace {workspace_id!r}")
            session = WorkspaceSession(
                workspace=load_workspace(path, clock=self._clock_factory()),
                directory=directory,
                session_log=SessionLog.load(directory / SESSION_LOG_FILE),
                mutation_log=MutationLog.load(directory / MUTATION_LOG_FILE),
            )
            self._sessions[workspace_id] = session
            return session

    # --- the single mutation entry point ------------------------------------

    def apply(self, workspace_id: str, op: str, args: dict[str, Any]) -> Any:
        session = self.get(workspace_id)
        with session.lock:
            ws = session.workspace
            canvases_before = set(ws.canvases) if op == "semantic_dive" else None
            edges_before = (set(ws.canvases[args["canvas"]].edges)
                            if op == "paste_subgraph" and args["canvas"] in ws.canvases
                            else None)
            edited_node = ws.find_node(args["node"])[1] if op == "set_node_text" \
                else None

            result = apply_mutation(ws, op, args)
            at = ws.modified_at
            node_age_ms = (at - edited_node.created_at) if edited_node else None

            record = session.mutation_log.append(op, args, _jsonify(result), at)
            self._append_line(session.directory / MUTATION_LOG_FILE,
                              record.to_dict())
            self._emit_analytics(session, op, args, result, at,
                                 canvases_before, edges_before, node_age_ms)
            session.bus.publish({"type": "mutation", "op": op, "args": args,
                                 "result": _jsonify(result), "at": at})
            session.dirty = True
        self._schedule_autosave(session)
        return result

    def record_event(self, session: WorkspaceSession, kind: EventKind,
                     data: dict[str, Any], at: int | None = None) -> int:
        """Append an analytics event (also used for UI-signaled events that
        carry no workspace mutation)."""
        with session.lock:
            seq = session.session_log.record(
                kind, data, self._event_clock() if at is None else at)
            event = session.session_log.events[-1]
            self._append_line(session.directory / SESSION_LOG_FILE,
                              event.to_dict())
            return seq

    # --- analytics fan-out ------------------------------------------------------

    def _emit_analytics(self, session, op, args, result, at,
                        canvases_before, edges_before, node_age_ms) -> None:
        ws = session.workspace

        def record(kind: EventKind, data: dict[str, Any]) -> None:
            self.record_event(session, kind, data, at=at)
        if op == "create_node":
            record(EventKind.NODE_CREATED, {"node": result, "kind": args["kind"]})
        elif op == "extract_text":
            record(EventKind.TEXT_EXTRACTED,
                   {"source": args["source"], "new_node": result})
            record(EventKind.NODE_CREATED,
                   {"node": result, "kind": NodeKind.CONCEPT.value})
        elif op == "group_nodes":
            record(EventKind.GROUP_CREATED, {"group": result})
            record(EventKind.NODE_CREATED,
                   {"node": result, "kind": NodeKind.GROUP.value})
        elif op == "connect":
            record(EventKind.EDGE_CREATED, {"edge": result})
        elif op == "semantic_dive":
            if result not in canvases_before:
                record(EventKind.CANVAS_CREATED,
                       {"canvas": result, "via": CanvasOrigin.DIVE.value})
        elif op in ("add_canvas_above", "add_subtopic_canvas", "create_hierarchy"):
            record(EventKind.CANVAS_CREATED,
                   {"canvas": result, "via": _CANVAS_EVENT_VIA[op].value})
        elif op == "paste_subgraph":
            canvas = ws.canvases[args["canvas"]]
            for new_id in result.values():
                record(EventKind.NODE_CREATED,
                       {"node": new_id, "kind": canvas.nodes[new_id].kind.value})
            for edge_id in set(canvas.edges) - edges_before:
                record(EventKind.EDGE_CREATED, {"edge": edge_id})
        elif op == "set_node_text":
            if node_age_ms is not None and node_age_ms > self.config.edit_revisit_age_ms:
                record(EventKind.NODE_REVISITED,
                       {"node": args["node"], "via": RevisitKind.EDIT.value})

    # --- persistence --------------------------------------------------------------

    def _append_line(self, path: Path, payload: dict) -> None:
        with open(path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(payload, sort_keys=True) + "\n")

    def _schedule_autosave(self, session: WorkspaceSession) -> None:
        delay = self.config.autosave_delay_s
        if delay <= 0:
            self._save(session)
            return
        with session.lock:
            if session._autosave_timer is not None:
                session._autosave_timer.cancel()
            timer = threading.Timer(delay, self._save, args=(session,))
            timer.daemon = True
            session._autosave_timer = timer
            timer.start()

    def _save(self, session: WorkspaceSession) -> None:
        with session.lock:
            if not session.dirty:
                return
            save_workspace(session.workspace, session.workspace_path)
            session.dirty = False
            session.saves_performed += 1

    def flush(self) -> None:
        """Persist every dirty session now (shutdown path)."""
        with self._lock:
            sessions = list(self._sessions.values())
        for session in sessions:
            with session.lock:
                if session._autosave_timer is not None:
                    session._autosave_timer.cancel()
                    session._autosave_timer = None
            self._save(session)


def _jsonify(value: Any) -> Any:
    if isinstance(value, dict):
        return dict(value)
    return value
