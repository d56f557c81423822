"""Workspace exports for hand-off: raw JSON or a markdown outline with the
hierarchy as nested headings and each canvas's content as bullets."""

from __future__ import annotations

from ..model import NodeKind
from ..workspace import Workspace
from .persistence import workspace_file_bytes


def export_json(workspace: Workspace) -> str:
    return workspace_file_bytes(workspace).decode("utf-8")


def export_markdown_outline(workspace: Workspace) -> str:
    lines: list[str] = []
    for index, root in enumerate(workspace.roots):
        if index and lines and lines[-1] != "":
            lines.append("")
        _walk(workspace, root, 1, lines)
    while lines and lines[-1] == "":
        lines.pop()
    return "\n".join(lines) + "\n"


def _walk(workspace: Workspace, canvas_id: str, depth: int,
          lines: list[str]) -> None:
    canvas = workspace.canvases[canvas_id]
    lines.append("#" * min(depth, 6) + " " + canvas.topic)
    grouped: dict[str, list[str]] = {}
    for member, group in canvas.groups.items():
        grouped.setdefault(group, []).append(member)
    emitted = False
    for node in canvas.nodes.values():
        if node.kind is NodeKind.PORTAL or node.id in canvas.groups:
            continue  # portals become subsections; members ride their group
        if node.kind is NodeKind.GROUP:
            lines.append(f"- {_flatten(node.text)}")
            for member in grouped.get(node.id, []):
                lines.append(f"  - {_flatten(canvas.nodes[member].text)}")
            emitted = True
        elif node.text:
            lines.append(f"- {_flatten(node.text)}")
            emitted = True
    if emitted:
        lines.append("")
    for child in workspace.hierarchy.children(canvas_id):
        _walk(workspace, child, depth + 1, lines)


def _flatten(text: str) -> str:
    return " ".join(text.split())
