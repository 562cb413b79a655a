"""Stage-2 entity linking: resolve surface-form SPO elements to IRIs.

Resolution order for subjects and objects: the owner's personal alias
table first (the private circle), then an external linker above a
confidence threshold, and finally a minted concept carrying the surface
text. Predicates never go to the external linker; they consult a relation
IRI table (empty by default, so verbs become concepts) because entity
linkers produce nonsense for verbs.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Mapping, Optional, Protocol

import httpx

from .minting import IdMinter
from .nl2pkg import AnnotatedUtterance, Intent
from .terms import PKG_ALIAS, Iri, Literal, Quad
from .vocabulary import (
    AccessPolicy,
    Concept,
    PkgStatement,
    Preference,
    Provenance,
    SpoElement,
    element_node,
    utc_now,
)

log = logging.getLogger(__name__)

FIRST_PERSON_ALIASES = frozenset({"i", "me", "my", "myself"})

DBPEDIA_RESOURCE = "http://dbpedia.org/resource/"


def normalize_alias(surface: str) -> str:
    return " ".join(surface.split()).casefold()


@dataclass
class PersonalAliasTable:
    """Aliases of the owner's private circle. First-person aliases always
    resolve to the owner, whatever the stored entries say."""

    owner: Iri
    entries: dict[str, Iri] = field(default_factory=dict)

    @classmethod
    def from_pairs(cls, owner: Iri, pairs: Mapping[str, Iri]) -> "PersonalAliasTable":
        return cls(owner, {normalize_alias(alias): iri for alias, iri in pairs.items()})

    def lookup(self, surface: str) -> Optional[Iri]:
        key = normalize_alias(surface)
        if key in FIRST_PERSON_ALIASES:
            return self.owner
        return self.entries.get(key)

    def quads(self, graph: Iri) -> list[Quad]:
        """The table as graph content (entity pkg:alias "text"), so aliases
        export and import with the rest of the PKG."""
        return [
            Quad(graph, iri, PKG_ALIAS, Literal(alias))
            for alias, iri in sorted(self.entries.items())
        ]


@dataclass(frozen=True)
class LinkCandidate:
    surface: str
    iri: Iri
    confidence: float
    source: str  # "local" | "external"


def link_local(surface: str, table: PersonalAliasTable) -> Optional[LinkCandidate]:
    iri = table.lookup(surface)
    if iri is None:
        return None
    return LinkCandidate(surface=surface, iri=iri, confidence=1.0, source="local")


class EntityLinker(Protocol):
    def link(self, surface: str) -> list[LinkCandidate]: ...


def normalize_linker_payload(surface: str, payload: object) -> list[LinkCandidate]:
    """Map a linker response to candidates. Accepts the native shape
    ``{"annotations": [{"surface", "iri", "confidence"}]}`` plus the two
    common service shapes: Spotlight-style ``{"Resources": [...]}`` and
    REL-style ``[[start, end, mention, entity, ...scores]]``."""
    candidates: list[LinkCandidate] = []
    if isinstance(payload, dict) and "annotations" in payload:
        for entry in payload.get("annotations") or []:
            try:
                candidates.append(
                    LinkCandidate(
                        surface=str(entry.get("surface", surface)),
                        iri=Iri(str(entry["iri"])),
                        confidence=float(entry["confidence"]),
                        source="external",
                    )
                )
            except (KeyError, TypeError, ValueError):
                log.warning("skipping malformed linker annotation: %r", entry)
    elif isinstance(payload, dict) and "Resources" in payload:
        for entry in payload.get("Resources") or []:
            try:
                candidates.append(
                    LinkCandidate(
                        surface=str(entry.get("@surfaceForm", surface)),
                        iri=Iri(str(entry["@URI"])),
                        confidence=float(entry.get("@similarityScore", 0.0)),
                        source="external",
                    )
                )
            except (KeyError, TypeError, ValueError):
                log.warning("skipping malformed Spotlight resource: %r", entry)
    elif isinstance(payload, list):
        for entry in payload:
            try:
                mention, entity = str(entry[2]), str(entry[3])
                confidence = float(entry[4]) if len(entry) > 4 else 0.0
                candidates.append(
                    LinkCandidate(
                        surface=mention,
                        iri=Iri(DBPEDIA_RESOURCE + entity.replace(" ", "_")),
                        confidence=confidence,
                        source="external",
                    )
                )
            except (IndexError, TypeError, ValueError):
                log.warning("skipping malformed REL annotation: %r", entry)
    candidates.sort(key=lambda c: (-c.confidence, c.iri.value))
    return candidates


class HttpEntityLinker:
    """Client for an annotation service: POST {"text": surface} and read
    candidates back. Linking is best-effort; failures log a warning and
    yield no candidates."""

    def __init__(self, endpoint: str, timeout: float = 10.0, client: Optional[httpx.Client] = None):
        self.endpoint = endpoint
        self.timeout = timeout
        self._client = client if client is not None else httpx.Client(timeout=timeout)

    def link(self, surface: str) -> list[LinkCandidate]:
        try:
            response = self._client.post(
                self.endpoint, json={"text": surface}, timeout=self.timeout
            )
            response.raise_for_status()
            payload = response.json()
        except (httpx.HTTPError, ValueError) as exc:
            log.warning("entity linker unavailable for %r: %s", surface, exc)
            return []
        return normalize_linker_payload(surface, payload)


@dataclass(frozen=True)
class RelationIriTable:
    """Lemma-to-IRI mapping consulted for predicates. Empty by default:
    unmapped relation verbs become concepts."""

    entries: Mapping[str, Iri] = field(default_factory=dict)

    def lookup(self, lemma: str) -> Optional[Iri]:
        return self.entries.get(normalize_alias(lemma))


EMPTY_RELATIONS = RelationIriTable()


class IncompleteAnnotationError(ValueError):
    def __init__(self, missing: list[str]):
        self.missing = missing
        super().__init__("annotation lacks " + ", ".join(missing))


def _resolve_entity(
    surface: str,
    table: PersonalAliasTable,
    linker: Optional[EntityLinker],
    threshold: float,
    minter: IdMinter,
) -> SpoElement:
    local = link_local(surface, table)
    if local is not None:
        return local.iri
    if linker is not None:
        for candidate in linker.link(surface):
            if candidate.confidence >= threshold:
                return candidate.iri
    return Concept(id=minter.mint("concept"), text=surface)


def _resolve_relation(surface: str, relations: RelationIriTable, minter: IdMinter) -> SpoElement:
    iri = relations.lookup(surface)
    if iri is not None:
        return iri
    return Concept(id=minter.mint("concept"), text=surface)


def resolve(
    annotation: AnnotatedUtterance,
    table: PersonalAliasTable,
    *,
    minter: IdMinter,
    agent: Iri,
    clock=utc_now,
    linker: Optional[EntityLinker] = None,
    threshold: float = 0.5,
    relations: RelationIriTable = EMPTY_RELATIONS,
) -> PkgStatement:
    """Turn an ADD annotation into a statement: every element ends up
    resolved or a concept, and a polarity becomes a preference whose topic
    is the resolved object element."""
    if annotation.intent != Intent.ADD:
        raise ValueError(f"resolve() handles ADD annotations, got {annotation.intent.value}")
    missing = [
        name
        for name, value in (
            ("subject", annotation.subject_text),
            ("predicate", annotation.predicate_text),
            ("object", annotation.object_text),
        )
        if not value
    ]
    if missing:
        raise IncompleteAnnotationError(missing)

    statement_id = minter.mint("stmt")
    subject = _resolve_entity(annotation.subject_text, table, linker, threshold, minter)
    predicate = _resolve_relation(annotation.predicate_text, relations, minter)
    object_ = _resolve_entity(annotation.object_text, table, linker, threshold, minter)

    preference = None
    if annotation.preference_polarity is not None:
        preference = Preference(
            id=minter.mint("pref"),
            holder=element_node(subject),
            topic=object_,
            weight=float(annotation.preference_polarity),
            derived_from=statement_id,
        )

    return PkgStatement(
        id=statement_id,
        annotation=annotation.raw,
        subject=subject,
        predicate=predicate,
        object=object_,
        provenance=Provenance(created_by=agent, created_on=clock()),
        access=AccessPolicy(),
        preference=preference,
    )


def resolve_pattern_element(
    surface: Optional[str],
    table: PersonalAliasTable,
    *,
    linker: Optional[EntityLinker] = None,
    threshold: float = 0.5,
) -> "Iri | str | None":
    """GET/DELETE elements resolve like ADD elements, except an unresolved
    surface stays text (matched against IRIs and concept labels) and an
    absent one is a wildcard."""
    if surface is None:
        return None
    local = link_local(surface, table)
    if local is not None:
        return local.iri
    if linker is not None:
        for candidate in linker.link(surface):
            if candidate.confidence >= threshold:
                return candidate.iri
    return surface


def resolve_relation_pattern(
    surface: Optional[str], relations: RelationIriTable = EMPTY_RELATIONS
) -> "Iri | str | None":
    if surface is None:
        return None
    return relations.lookup(surface) or surface
