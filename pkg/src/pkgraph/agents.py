"""Agents and credentials: one owner per graph plus the third-party
services registered with that owner. Tokens are bearer secrets issued at
registration and stored hashed."""

from __future__ import annotations

import hashlib
import secrets
from dataclasses import dataclass, field
from typing import Optional

from .terms import Iri


def hash_token(token: str) -> str:
    return hashlib.sha256(token.encode("utf-8")).hexdigest()


@dataclass
class Agent:
    id: Iri
    kind: str  # "owner" | "service"
    token_hash: str


@dataclass
class OwnerRecord:
    name: str
    graph: Iri
    agent: Agent
    services: dict[str, Agent] = field(default_factory=dict)  # keyed by service IRI


class DuplicateAgentError(ValueError):
    pass


class AgentRegistry:
    def __init__(self) -> None:
        self._owners: dict[str, OwnerRecord] = {}
        self._by_token: dict[str, tuple[str, Agent]] = {}

    def owners(self) -> list[OwnerRecord]:
        return [self._owners[name] for name in sorted(self._owners)]

    def owner(self, name: str) -> Optional[OwnerRecord]:
        return self._owners.get(name)

    def register_owner(self, name: str, graph: Iri) -> tuple[OwnerRecord, str]:
        if name in self._owners:
            raise DuplicateAgentError(f"owner {name!r} already registered")
        token = secrets.token_urlsafe(32)
        agent = Agent(id=graph, kind="owner", token_hash=hash_token(token))
        record = OwnerRecord(name=name, graph=graph, agent=agent)
        self._owners[name] = record
        self._by_token[agent.token_hash] = (name, agent)
        return record, token

    def register_service(self, owner_name: str, service: Iri) -> tuple[Agent, str]:
        record = self._owners.get(owner_name)
        if record is None:
            raise KeyError(owner_name)
        if service.value in record.services:
            raise DuplicateAgentError(f"service {service.value} already registered with {owner_name}")
        token = secrets.token_urlsafe(32)
        agent = Agent(id=service, kind="service", token_hash=hash_token(token))
        record.services[service.value] = agent
        self._by_token[agent.token_hash] = (owner_name, agent)
        return agent, token

    def authenticate(self, token: str) -> Optional[tuple[str, Agent]]:
        """Resolve a bearer token to (owner name, agent); a service token
        only ever authenticates within the owner it was registered with."""
        return self._by_token.get(hash_token(token))

    # Restoration from a persisted state file: hashes only, never tokens.

    def restore_owner(self, name: str, graph: Iri, token_hash: str) -> OwnerRecord:
        agent = Agent(id=graph, kind="owner", token_hash=token_hash)
        record = OwnerRecord(name=name, graph=graph, agent=agent)
        self._owners[name] = record
        self._by_token[token_hash] = (name, agent)
        return record

    def restore_service(self, owner_name: str, service: Iri, token_hash: str) -> Agent:
        record = self._owners[owner_name]
        agent = Agent(id=service, kind="service", token_hash=token_hash)
        record.services[service.value] = agent
        self._by_token[token_hash] = (owner_name, agent)
        return agent
