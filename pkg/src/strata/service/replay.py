"""Named engine mutations with JSON-safe arguments.

The live service and the ``replay`` command share this dispatch table, so
whatever the service logged can be re-applied verbatim: same ops, same
arguments, same injected timestamps, byte-identical workspace afterwards.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable

from ..clock import FixedClock
from ..errors import CorruptFile
from ..model import NodeKind, Provenance, SemanticLevel, TopicSource
from ..workspace import ClipboardPayload, Workspace

CREATE_WORKSPACE = "create_workspace"


@dataclass(frozen=True)
class MutationRecord:
    seq: int
    at: int
    op: str
    args: dict[str, Any]
    result: Any

    def to_dict(self) -> dict[str, Any]:
        return {"seq": self.seq, "at": self.at, "op": self.op,
                "args": self.args, "result": self.result}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "MutationRecord":
        try:
            return cls(seq=int(d["seq"]), at=int(d["at"]), op=str(d["op"]),
                       args=dict(d["args"]), result=d["result"])
        except (KeyError, TypeError, ValueError) as exc:
            raise CorruptFile(f"malformed mutation record: {exc}") from exc


class MutationLog:
    def __init__(self, records=()):
        self._records: list[MutationRecord] = list(records)

    def append(self, op: str, args: dict[str, Any], result: Any,
               at: int) -> MutationRecord:
        record = MutationRecord(seq=len(self._records) + 1, at=at, op=op,
                                args=args, result=result)
        self._records.append(record)
        return record

    @property
    def records(self) -> tuple[MutationRecord, ...]:
        return tuple(self._records)

    def __len__(self) -> int:
        return len(self._records)

    @classmethod
    def from_lines(cls, text: str) -> "MutationLog":
        return cls(MutationRecord.from_dict(json.loads(line))
                   for line in text.splitlines() if line.strip())

    @classmethod
    def load(cls, path: str | Path) -> "MutationLog":
        p = Path(path)
        if not p.exists():
            return cls()
        return cls.from_lines(p.read_text(encoding="utf-8"))


def _pos(value) -> tuple[float, float]:
    return (float(value[0]), float(value[1]))


_DISPATCH: dict[str, Callable[[Workspace, dict[str, Any]], Any]] = {
    "create_node": lambda ws, a: ws.create_node(
        a["canvas"], NodeKind(a["kind"]), a["text"], _pos(a["position"]),
        provenance=Provenance.from_dict(a["provenance"])),
    "set_node_text": lambda ws, a: ws.set_node_text(a["canvas"], a["node"], a["text"]),
    "move_node": lambda ws, a: ws.move_node(a["canvas"], a["node"],
                                            _pos(a["position"])),
    "extract_text": lambda ws, a: ws.extract_text(
        a["canvas"], a["source"], (int(a["span"][0]), int(a["span"][1])),
        _pos(a["position"])),
    "group_nodes": lambda ws, a: ws.group_nodes(a["canvas"], a["members"], a["label"]),
    "connect": lambda ws, a: ws.connect(a["canvas"], a["source"], a["target"],
                                        a.get("label")),
    "semantic_dive": lambda ws, a: ws.semantic_dive(a["canvas"], a["node"]),
    "add_canvas_above": lambda ws, a: ws.add_canvas_above(a["roots"], a["topic"]),
    "add_subtopic_canvas": lambda ws, a: ws.add_subtopic_canvas(
        a["parent"], a["topic"], generated=bool(a["generated"])),
    "create_hierarchy": lambda ws, a: ws.create_hierarchy(a["topic"]),
    "delete_canvas_branch": lambda ws, a: ws.delete_canvas_branch(a["canvas"]),
    "paste_subgraph": lambda ws, a: ws.paste_subgraph(
        a["canvas"], ClipboardPayload.from_dict(a["payload"]), _pos(a["offset"])),
    "set_canvas_topic": lambda ws, a: ws.set_canvas_topic(
        a["canvas"], a["topic"], TopicSource(a["source"])),
    "store_rendition": lambda ws, a: ws.store_rendition(
        a["canvas"], a["node"], SemanticLevel(a["level"]), a["text"]),
}

MUTATION_OPS = frozenset(_DISPATCH) | {CREATE_WORKSPACE}


def apply_mutation(workspace: Workspace, op: str, args: dict[str, Any]) -> Any:
    try:
        fn = _DISPATCH[op]
    except KeyError:
        raise CorruptFile(f"unknown mutation op {op!r}") from None
    return fn(workspace, args)


def replay_log(log: MutationLog) -> Workspace:
    """Re-apply a recorded mutation log against a fresh workspace. Timestamps
    come from the records, so the result is identical to the live run."""
    records = log.records
    if not records or records[0].op != CREATE_WORKSPACE:
        raise CorruptFile("mutation log must start with a create_workspace record")
    clock = FixedClock(records[0].at)
    workspace = Workspace.new(records[0].args["id"], records[0].args["topic"],
                              clock=clock)
    for record in records[1:]:
        clock.ms = record.at
        result = apply_mutation(workspace, record.op, record.args)
        if record.result is not None and result != record.result:
            raise CorruptFile(
                f"replay diverged at seq {record.seq}: {record.op} returned "
                f"{result!r}, log says {record.result!r}")
    return workspace
