"""Command line entry points: serve, export, metrics, replay."""

from __future__ import annotations

import json
import socket
import sys
from pathlib import Path

import click

from .analytics import SessionLog, compute_metrics, load_glossary
from .errors import PortInUse, StrataError
from .service.config import ServiceConfig
from .service.export import export_json, export_markdown_outline
from .service.persistence import load_workspace, workspace_file_bytes
from .service.replay import MutationLog, replay_log


@click.group()
def main():
    """Multilevel canvas workspace engine."""


@main.command()
@click.option("--host", default=None, help="Bind address.")
@click.option("--port", type=int, default=None, help="Bind port.")
@click.option("--data-dir", type=click.Path(), default=None,
              help="Workspace storage directory.")
@click.option("--config", "config_path", type=click.Path(exists=True),
              default=None, help="JSON config file.")
@click.option("--demo", is_flag=True, help="Seed the demo workspace.")
@click.option("--mock-llm", is_flag=True,
              help="Use the deterministic fixture provider instead of a real one.")
@click.option("--glossary", "glossary_path", type=click.Path(exists=True),
              default=None, help="Default glossary for the metrics endpoint.")
def serve(host, port, data_dir, config_path, demo, mock_llm, glossary_path):
    """Run the HTTP service."""
    import uvicorn

    from .service.api import create_app

    try:
        config = ServiceConfig.load(
            config_path, host=host, port=port, data_dir=data_dir,
            demo=demo or None, mock_llm=mock_llm or None,
            glossary_path=glossary_path)
        _check_port_free(config.host, config.port)
        app = create_app(config)
    except StrataError as exc:
        raise click.ClickException(f"{exc.code}: {exc}") from exc
    click.echo(f"serving on http://{config.host}:{config.port} "
               f"(data: {config.data_dir}, mock_llm: {config.mock_llm})")
    uvicorn.run(app, host=config.host, port=config.port, log_level="warning")


def _check_port_free(host: str, port: int) -> None:
    if port == 0:
        return
    with socket.socket(socket.AF_INET, socket.SOCK_STREAM) as probe:
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        try:
            probe.bind((host, port))
        except OSError as exc:
            raise PortInUse(f"cannot bind {host}:{port}: {exc}") from exc


@main.command()
@click.argument("workspace_file", type=click.Path(exists=True))
@click.option("--format", "fmt", type=click.Choice(["json", "markdown-outline"]),
              default="json", show_default=True)
@click.option("-o", "--output", type=click.Path(), default=None,
              help="Write to a file instead of stdout.")
def export(workspace_file, fmt, output):
    """Export a workspace file as JSON or a markdown outline."""
    try:
        workspace = load_workspace(workspace_file)
        text = export_json(workspace) if fmt == "json" \
            else export_markdown_outline(workspace)
    except StrataError as exc:
        raise click.ClickException(f"{exc.code}: {exc}") from exc
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


@main.command()
@click.argument("workspace_file", type=click.Path(exists=True))
@click.argument("session_log", type=click.Path(exists=True))
@click.argument("glossary", type=click.Path(exists=True))
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
def metrics(workspace_file, session_log, glossary, as_json):
    """Compute session measures for a workspace + log + glossary."""
    try:
        workspace = load_workspace(workspace_file)
        log = SessionLog.load(session_log)
        report = compute_metrics(workspace, log, load_glossary(glossary))
    except StrataError as exc:
        raise click.ClickException(f"{exc.code}: {exc}") from exc
    if as_json:
        click.echo(json.dumps(report.to_dict(), indent=2, sort_keys=True))
        return
    width = max(len(k) for k in report.to_dict())
    for key, value in report.to_dict().items():
        click.echo(f"{key.replace('_', ' '):<{width + 2}}{value}")


@main.command()
@click.argument("mutation_log", type=click.Path(exists=True))
@click.option("-o", "--output", type=click.Path(), default=None,
              help="Write the reproduced workspace file here.")
def replay(mutation_log, output):
    """Re-apply a recorded mutation log against a fresh workspace."""
    try:
        workspace = replay_log(MutationLog.load(mutation_log))
    except StrataError as exc:
        raise click.ClickException(f"{exc.code}: {exc}") from exc
    data = workspace_file_bytes(workspace)
    if output:
        Path(output).write_bytes(data)
        click.echo(f"replayed {workspace.id}: {len(workspace.canvases)} canvases "
                   f"-> {output}")
    else:
        sys.stdout.buffer.write(data)


if __name__ == "__main__":
    main()
