"""REST facade: one entry point for natural-language statements and one
for structured requests, with per-statement access rights enforced for
service agents. The owner always sees everything in their own graph."""

from __future__ import annotations

import logging
import secrets
from typing import Optional

from fastapi import Depends, FastAPI, Header, HTTPException, Query, Response

from .agents import Agent, AgentRegistry, DuplicateAgentError, OwnerRecord
from .config import PkgConfig, build_engine
from .connector import ActionResult, StatementPattern, statement_delete_query
from .engine import PkgEngine, UtteranceNotUnderstood
from .linking import IncompleteAnnotationError
from .nl2pkg import Intent
from .persistence import load_state, save_state
from .schemas import (
    AccessIn,
    NlIn,
    OwnerIn,
    ServiceIn,
    StatementIn,
    action_result_to_json,
    annotation_to_json,
    preference_to_json,
    statement_to_json,
)
from .sparql import query_to_text
from .terms import Iri, is_valid_iri
from .vocabulary import AccessPolicy, PkgStatement, ValidationFailed

log = logging.getLogger(__name__)


def _parse_pattern_param(value: Optional[str]) -> "Iri | str | None":
    if value is None or value == "":
        return None
    v = value.strip()
    if v.startswith("<") and v.endswith(">"):
        return Iri(v[1:-1])
    if is_valid_iri(Iri(v)):
        return Iri(v)
    return v


def _mint_iri(base: str, kind: str, name: str) -> Iri:
    candidate = Iri(name)
    if is_valid_iri(candidate):
        return candidate
    return Iri(f"{base.rstrip('/')}/{kind}/{name}")


def create_app(
    *,
    engine: Optional[PkgEngine] = None,
    registry: Optional[AgentRegistry] = None,
    config: Optional[PkgConfig] = None,
    admin_token: Optional[str] = None,
    state_path: Optional[str] = None,
) -> FastAPI:
    cfg = config or PkgConfig()
    engine = engine if engine is not None else build_engine(cfg)
    registry = registry if registry is not None else AgentRegistry()
    state_path = state_path if state_path is not None else cfg.data_file
    admin = admin_token or cfg.admin_token
    if admin is None:
        admin = secrets.token_urlsafe(24)
        log.warning("no admin token configured; generated one: %s", admin)
    if state_path:
        load_state(state_path, engine, registry)

    app = FastAPI(title="pkgraph", version="0.1.0")
    app.state.engine = engine
    app.state.registry = registry
    app.state.admin_token = admin

    def persist() -> None:
        if state_path:
            save_state(state_path, engine, registry)

    def require_admin(authorization: Optional[str] = Header(None)) -> None:
        if authorization != f"Bearer {admin}":
            raise HTTPException(401, "admin token required")

    def authenticated(
        owner: str, authorization: Optional[str] = Header(None)
    ) -> tuple[OwnerRecord, Agent]:
        if not authorization or not authorization.startswith("Bearer "):
            raise HTTPException(401, "bearer token required")
        resolved = registry.authenticate(authorization[len("Bearer "):])
        if resolved is None:
            raise HTTPException(401, "unknown token")
        owner_name, agent = resolved
        record = registry.owner(owner)
        if record is None:
            raise HTTPException(404, f"unknown owner {owner!r}")
        if owner_name != owner:
            raise HTTPException(403, "agent is not registered with this owner")
        return record, agent

    def readable(stmt: PkgStatement, agent: Agent) -> bool:
        return agent.kind == "owner" or agent.id in stmt.access.read

    def writable(stmt: PkgStatement, agent: Agent) -> bool:
        return agent.kind == "owner" or agent.id in stmt.access.write

    def statement_iri(record: OwnerRecord, sid: str) -> Iri:
        if ":" in sid:
            return Iri(sid)
        return Iri(f"{record.graph.value.rstrip('/')}/stmt/{sid}")

    # ---- admin bootstrap ----

    @app.post("/admin/owners", status_code=201, dependencies=[Depends(require_admin)])
    def register_owner(body: OwnerIn):
        graph = _mint_iri(cfg.base_namespace, "users", body.iri or body.name)
        try:
            record, token = registry.register_owner(body.name, graph)
        except DuplicateAgentError as exc:
            raise HTTPException(409, str(exc))
        aliases = {alias: Iri(target) for alias, target in body.aliases.items()}
        engine.register_owner(graph, aliases)
        persist()
        return {"name": record.name, "id": graph.value, "token": token}

    @app.post(
        "/admin/owners/{owner}/services", status_code=201, dependencies=[Depends(require_admin)]
    )
    def register_service(owner: str, body: ServiceIn):
        record = registry.owner(owner)
        if record is None:
            raise HTTPException(404, f"unknown owner {owner!r}")
        service = _mint_iri(cfg.base_namespace, "services", body.id)
        try:
            agent, token = registry.register_service(owner, service)
        except DuplicateAgentError as exc:
            raise HTTPException(409, str(exc))
        persist()
        return {"id": agent.id.value, "token": token}

    # ---- natural-language entry point ----

    @app.post("/pkg/{owner}/nl")
    def post_nl(owner: str, body: NlIn, ctx=Depends(authenticated)):
        record, agent = ctx
        try:
            annotation, action = engine.annotate_and_resolve(record.graph, agent.id, body.statement)
        except UtteranceNotUnderstood as exc:
            raise HTTPException(
                422,
                {
                    "message": "utterance not understood",
                    "annotation": annotation_to_json(exc.annotation),
                    "violations": [{"path": v.path, "message": v.message} for v in exc.violations],
                },
            )
        except IncompleteAnnotationError as exc:
            raise HTTPException(422, {"message": str(exc)})

        if action.intent == Intent.ADD:
            try:
                result = engine.connector.execute_action(action, record.graph)
            except ValidationFailed as exc:
                raise HTTPException(400, str(exc))
            persist()
        elif action.intent == Intent.GET:
            result = engine.connector.execute_action(action, record.graph)
            if agent.kind == "service":
                visible = [s for s in result.result if readable(s, agent)]
                result = ActionResult(result.intent, result.query, visible)
        else:  # DELETE, enforced per statement
            located = engine.connector.locate(action.pattern, record.graph)
            if agent.kind == "service":
                located = [s for s in located if readable(s, agent)]
                blocked = [s for s in located if not writable(s, agent)]
                if blocked:
                    raise HTTPException(403, "service lacks write access to matching statements")
            texts = [query_to_text(engine.connector.locating_select(action.pattern, record.graph))]
            for stmt in located:
                texts.append(query_to_text(statement_delete_query(stmt.id, record.graph)))
            engine.delete_statements(record.graph, [s.id for s in located])
            result = ActionResult(Intent.DELETE, "\n".join(texts), len(located))
            persist()
        response = action_result_to_json(result)
        response["annotation"] = annotation_to_json(annotation)
        return response

    # ---- structured statement CRUD ----

    @app.post("/pkg/{owner}/statements", status_code=201)
    def add_statement(owner: str, body: StatementIn, ctx=Depends(authenticated)):
        record, agent = ctx
        access = body.access or AccessIn()
        try:
            result = engine.add_statement(
                record.graph,
                agent.id,
                annotation=body.annotation,
                subject=body.subject.value(),
                predicate=body.predicate.value(),
                object=body.object.value(),
                preference_weight=body.preference.weight if body.preference else None,
                read=frozenset(Iri(v) for v in access.read),
                write=frozenset(Iri(v) for v in access.write),
            )
        except (ValidationFailed, ValueError) as exc:
            raise HTTPException(400, str(exc))
        persist()
        stmt = engine.get_statement(record.graph, result.result)
        payload = statement_to_json(stmt)
        payload["query"] = result.query
        return payload

    @app.get("/pkg/{owner}/statements")
    def get_statements(
        owner: str,
        s: Optional[str] = Query(None),
        p: Optional[str] = Query(None),
        o: Optional[str] = Query(None),
        ctx=Depends(authenticated),
    ):
        record, agent = ctx
        pattern = StatementPattern(
            subject=_parse_pattern_param(s),
            predicate=_parse_pattern_param(p),
            object=_parse_pattern_param(o),
        )
        statements = engine.connector.locate(pattern, record.graph)
        statements = [stmt for stmt in statements if readable(stmt, agent)]
        return [statement_to_json(stmt) for stmt in statements]

    @app.delete("/pkg/{owner}/statements/{sid}")
    def delete_statement(owner: str, sid: str, ctx=Depends(authenticated)):
        record, agent = ctx
        stmt = engine.get_statement(record.graph, statement_iri(record, sid))
        if stmt is None or not readable(stmt, agent):
            raise HTTPException(404, "unknown statement")
        if not writable(stmt, agent):
            raise HTTPException(403, "write access required")
        engine.delete_statements(record.graph, [stmt.id])
        persist()
        return {"count": 1}

    # ---- preferences ----

    @app.get("/pkg/{owner}/preferences")
    def get_preferences(
        owner: str, topic: Optional[str] = Query(None), ctx=Depends(authenticated)
    ):
        record, agent = ctx
        pairs = engine.preferences_with_sources(record.graph, _parse_pattern_param(topic))
        return [
            preference_to_json(pref)
            for pref, source in pairs
            if readable(source, agent)
        ]

    # ---- access rights, graph view, export ----

    @app.put("/pkg/{owner}/statements/{sid}/access")
    def put_access(owner: str, sid: str, body: AccessIn, ctx=Depends(authenticated)):
        record, agent = ctx
        if agent.kind != "owner":
            raise HTTPException(403, "only the owner manages access rights")
        policy = AccessPolicy(
            read=frozenset(Iri(v) for v in body.read),
            write=frozenset(Iri(v) for v in body.write),
        )
        try:
            updated = engine.set_access(record.graph, statement_iri(record, sid), policy)
        except KeyError:
            raise HTTPException(404, "unknown statement")
        except ValidationFailed as exc:
            raise HTTPException(400, str(exc))
        persist()
        return statement_to_json(updated)

    @app.get("/pkg/{owner}/graph")
    def get_graph(owner: str, ctx=Depends(authenticated)):
        record, agent = ctx
        statements = engine.connector.all_statements(record.graph)
        if agent.kind == "service":
            statements = [stmt for stmt in statements if readable(stmt, agent)]
        return engine.graph_view(record.graph, statements)

    @app.get("/pkg/{owner}/export")
    def export_graph(owner: str, ctx=Depends(authenticated)):
        record, agent = ctx
        if agent.kind != "owner":
            raise HTTPException(403, "only the owner exports the graph")
        return Response(engine.export_turtle(record.graph), media_type="text/turtle")

    return app
