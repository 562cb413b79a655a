"""Command line: serve the REST API, ingest NL statements from a file,
run a SELECT against an owner graph, export an owner graph as Turtle."""

from __future__ import annotations

import sys
from typing import Optional

import click

from .agents import AgentRegistry
from .config import PkgConfig, build_engine, load_config
from .engine import PkgEngine, UtteranceNotUnderstood
from .linking import IncompleteAnnotationError
from .persistence import load_state, save_state
from .schemas import action_result_to_json
from .store import ResultTable
from .terms import Iri, is_valid_iri, term_key


def _load(config_path: Optional[str]) -> tuple[PkgConfig, PkgEngine, AgentRegistry]:
    cfg = load_config(config_path) if config_path else PkgConfig()
    engine = build_engine(cfg)
    registry = AgentRegistry()
    if cfg.data_file:
        load_state(cfg.data_file, engine, registry)
    return cfg, engine, registry


def _owner_graph(
    cfg: PkgConfig, engine: PkgEngine, registry: AgentRegistry, owner: str, create: bool
) -> Iri:
    record = registry.owner(owner)
    if record is not None:
        return record.graph
    if not create:
        raise click.ClickException(f"unknown owner {owner!r} (use the API or --create)")
    graph = Iri(owner) if is_valid_iri(Iri(owner)) else Iri(f"{cfg.base_namespace.rstrip('/')}/users/{owner}")
    registry.register_owner(owner, graph)
    engine.register_owner(graph)
    return graph


@click.group()
def main() -> None:
    """Personal knowledge graph engine."""


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--host", default=None, help="Override the configured listen host.")
@click.option("--port", type=int, default=None, help="Override the configured listen port.")
def serve(config_path: Optional[str], host: Optional[str], port: Optional[int]) -> None:
    """Run the REST API server."""
    import uvicorn

    from .app import create_app

    cfg = load_config(config_path) if config_path else PkgConfig()
    app = create_app(config=cfg)
    listen_host, _, listen_port = cfg.listen.partition(":")
    uvicorn.run(
        app,
        host=host or listen_host or "127.0.0.1",
        port=port or int(listen_port or 8402),
    )


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--owner", required=True, help="Owner name (created on demand with --create).")
@click.option("--create", is_flag=True, help="Register the owner if missing.")
@click.argument("file", type=click.File("r", encoding="utf-8"))
def ingest(config_path: Optional[str], owner: str, create: bool, file) -> None:
    """Ingest one natural-language statement per line."""
    cfg, engine, registry = _load(config_path)
    graph = _owner_graph(cfg, engine, registry, owner, create)
    ok = failed = 0
    for line_no, line in enumerate(file, start=1):
        text = line.strip()
        if not text:
            continue
        try:
            annotation, result = engine.process_utterance(graph, graph, text)
        except (UtteranceNotUnderstood, IncompleteAnnotationError) as exc:
            failed += 1
            click.echo(f"line {line_no}: not understood ({exc}): {text}", err=True)
            continue
        ok += 1
        click.echo(f"line {line_no}: {result.intent.value} -> {_summary(result)}")
    if cfg.data_file:
        save_state(cfg.data_file, engine, registry)
    click.echo(f"{ok} ingested, {failed} rejected")
    if failed and not ok:
        sys.exit(1)


def _summary(result) -> str:
    payload = action_result_to_json(result)["result"]
    if isinstance(payload, list):
        return f"{len(payload)} statement(s)"
    return str(payload)


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--owner", required=True)
@click.argument("query_text")
def query(config_path: Optional[str], owner: str, query_text: str) -> None:
    """Run a SELECT (or update) from the textual query subset."""
    cfg, engine, registry = _load(config_path)
    graph = _owner_graph(cfg, engine, registry, owner, create=False)
    outcome = engine.run_select_text(graph, query_text)
    if isinstance(outcome, ResultTable):
        click.echo("\t".join(f"?{v}" for v in outcome.variables))
        for row in outcome.rows:
            click.echo("\t".join(term_key(t) for t in row))
        click.echo(f"({len(outcome.rows)} row(s))")
    else:
        if cfg.data_file:
            save_state(cfg.data_file, engine, registry)
        click.echo(f"revision {outcome}")


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.argument("owner")
def export(config_path: Optional[str], owner: str) -> None:
    """Print an owner graph as Turtle."""
    cfg, engine, registry = _load(config_path)
    graph = _owner_graph(cfg, engine, registry, owner, create=False)
    click.echo(engine.export_turtle(graph), nl=False)


if __name__ == "__main__":
    main()
