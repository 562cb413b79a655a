"""Load/save the whole service state to one JSON file: agent registry
(hashed credentials) plus each owner graph as embedded Turtle."""

from __future__ import annotations

import json
import os
import tempfile

from .agents import AgentRegistry
from .engine import PkgEngine
from .terms import Iri

STATE_VERSION = 1


def save_state(path: str, engine: PkgEngine, registry: AgentRegistry) -> None:
    owners = []
    for record in registry.owners():
        owners.append(
            {
                "name": record.name,
                "graph": record.graph.value,
                "token_hash": record.agent.token_hash,
                "services": [
                    {"id": agent.id.value, "token_hash": agent.token_hash}
                    for agent in sorted(record.services.values(), key=lambda a: a.id.value)
                ],
                "turtle": engine.export_turtle(record.graph),
            }
        )
    payload = {"version": STATE_VERSION, "owners": owners}
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".pkg-state-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_state(path: str, engine: PkgEngine, registry: AgentRegistry) -> bool:
    """Restore a previously saved state file; returns False when the file
    does not exist yet."""
    if not os.path.exists(path):
        return False
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("version") != STATE_VERSION:
        raise ValueError(f"unsupported state file version: {payload.get('version')!r}")
    for entry in payload.get("owners", []):
        graph = Iri(entry["graph"])
        record = registry.restore_owner(entry["name"], graph, entry["token_hash"])
        for service in entry.get("services", []):
            registry.restore_service(record.name, Iri(service["id"]), service["token_hash"])
        engine.register_owner(graph)
        engine.store.import_turtle(graph, entry.get("turtle", ""))
    return True
