"""Statement data model and its bidirectional mapping to reified RDF quads.

A stored statement is an ``rdf:Statement`` node carrying the original text
as a ``dcterms:description`` literal, S/P/O links whose targets are either
resolved IRIs or ``skos:Concept`` placeholder nodes, PAV provenance, per
statement read/write access rights, and optionally a derived preference
(holder -> preference node -> topic/weight/derivedFrom, plus a type quad:
five quads in total).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Iterable, Optional, Union

from .terms import (
    DCTERMS_DESCRIPTION,
    PAV_CREATED_BY,
    PAV_CREATED_ON,
    PAV_DERIVED_FROM,
    PKG_PREFERENCE,
    PKG_PREFERENCE_CLASS,
    PKG_READ_ACCESS,
    PKG_TOPIC,
    PKG_WEIGHT,
    PKG_WRITE_ACCESS,
    RDF_OBJECT,
    RDF_PREDICATE,
    RDF_STATEMENT,
    RDF_SUBJECT,
    RDF_TYPE,
    SKOS_BROADER,
    SKOS_CONCEPT,
    SKOS_NARROWER,
    SKOS_PREF_LABEL,
    SKOS_RELATED,
    XSD_DATETIME,
    XSD_DECIMAL,
    Iri,
    Literal,
    Quad,
    Term,
    is_valid_iri,
)


@dataclass(frozen=True)
class Concept:
    """Placeholder node for an S/P/O element that could not be resolved to
    an IRI; carries the extracted surface text and optional SKOS links.
    Link lists are normalized to sorted unique tuples so that round-trips
    through quads compare equal field-for-field."""

    id: Iri
    text: str
    related: tuple[Iri, ...] = ()
    broader: tuple[Iri, ...] = ()
    narrower: tuple[Iri, ...] = ()

    def __post_init__(self) -> None:
        for name in ("related", "broader", "narrower"):
            links = getattr(self, name)
            object.__setattr__(
                self, name, tuple(sorted(set(links), key=lambda i: i.value))
            )


SpoElement = Union[Iri, Concept]


def element_node(element: SpoElement) -> Iri:
    """The graph node standing for an element: the IRI itself, or the
    concept's minted id."""
    return element if isinstance(element, Iri) else element.id


@dataclass(frozen=True)
class Provenance:
    created_by: Iri
    created_on: datetime
    derived_from: Optional[Iri] = None


@dataclass(frozen=True)
class AccessPolicy:
    """Service agents allowed to read/write the statement. The owner is
    implicitly authorized and never listed."""

    read: frozenset[Iri] = field(default_factory=frozenset)
    write: frozenset[Iri] = field(default_factory=frozenset)


@dataclass(frozen=True)
class Preference:
    id: Iri
    holder: Iri
    topic: SpoElement
    weight: float
    derived_from: Iri


@dataclass(frozen=True)
class PkgStatement:
    id: Iri
    annotation: str
    subject: SpoElement
    predicate: SpoElement
    object: SpoElement
    provenance: Provenance
    access: AccessPolicy = field(default_factory=AccessPolicy)
    preference: Optional[Preference] = None


@dataclass(frozen=True)
class Violation:
    path: str
    message: str


class ValidationFailed(ValueError):
    def __init__(self, violations: list[Violation]):
        self.violations = violations
        detail = "; ".join(f"{v.path}: {v.message}" for v in violations)
        super().__init__(f"invalid statement: {detail}")


class StatementStructureError(ValueError):
    """A quad set does not contain a complete reified statement."""

    def __init__(self, statement_id: Iri, missing: list[str]):
        self.statement_id = statement_id
        self.missing = missing
        super().__init__(
            f"incomplete statement {statement_id.value}: missing " + ", ".join(missing)
        )


def format_datetime(dt: datetime) -> str:
    """UTC ISO-8601 at second precision, the xsd:dateTime lexical form used
    for pav:createdOn."""
    return dt.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def parse_datetime(lexical: str) -> datetime:
    text = lexical.strip()
    if text.endswith("Z"):
        text = text[:-1] + "+00:00"
    dt = datetime.fromisoformat(text)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc)


def format_decimal(value: float) -> str:
    """xsd:decimal lexical form; whole numbers keep one fractional digit so
    +1/-1 preferences read as "1.0"/"-1.0"."""
    if value == int(value):
        return f"{value:.1f}"
    return repr(value)


def utc_now() -> datetime:
    return datetime.now(timezone.utc).replace(microsecond=0)


def _check_iri(path: str, iri: object, out: list[Violation]) -> None:
    if not isinstance(iri, Iri) or not is_valid_iri(iri):
        shown = getattr(iri, "value", iri)
        out.append(Violation(path, f"not a valid absolute IRI: {shown!r}"))


def _check_element(path: str, element: SpoElement, out: list[Violation]) -> None:
    if isinstance(element, Concept):
        _check_iri(f"{path}.id", element.id, out)
        if not element.text.strip():
            out.append(Violation(f"{path}.text", "concept text is empty"))
        for kind in ("related", "broader", "narrower"):
            for i, link in enumerate(getattr(element, kind)):
                _check_iri(f"{path}.{kind}[{i}]", link, out)
    else:
        _check_iri(path, element, out)


def validate_statement(
    stmt: PkgStatement,
    *,
    now: Optional[datetime] = None,
    owner: Optional[Iri] = None,
) -> list[Violation]:
    """Check every statement-local invariant; empty list means valid.

    ``now`` enables the created-on-not-in-the-future check (the ingestion
    clock); ``owner`` enables the owner-never-in-access-sets check.
    """
    out: list[Violation] = []
    _check_iri("id", stmt.id, out)
    if not stmt.annotation.strip():
        out.append(Violation("annotation", "annotation text is empty"))
    _check_element("subject", stmt.subject, out)
    _check_element("predicate", stmt.predicate, out)
    _check_element("object", stmt.object, out)

    prov = stmt.provenance
    _check_iri("provenance.createdBy", prov.created_by, out)
    if prov.created_on.tzinfo is None:
        out.append(Violation("provenance.createdOn", "timestamp must be timezone-aware"))
    if prov.created_on.microsecond != 0:
        out.append(Violation("provenance.createdOn", "timestamp must have second precision"))
    if now is not None and prov.created_on.tzinfo is not None and prov.created_on > now:
        out.append(Violation("provenance.createdOn", "timestamp is in the future"))
    if prov.derived_from is not None:
        _check_iri("provenance.derivedFrom", prov.derived_from, out)

    for kind in ("read", "write"):
        for iri in sorted(getattr(stmt.access, kind), key=lambda i: i.value):
            _check_iri(f"access.{kind}", iri, out)
            if owner is not None and iri == owner:
                out.append(
                    Violation(f"access.{kind}", "owner is implicitly authorized, never stored")
                )

    pref = stmt.preference
    if pref is not None:
        _check_iri("preference.id", pref.id, out)
        _check_iri("preference.holder", pref.holder, out)
        if pref.holder != element_node(stmt.subject):
            out.append(
                Violation("preference.holder", "holder must be the statement's subject node")
            )
        _check_element("preference.topic", pref.topic, out)
        if not -1.0 <= pref.weight <= 1.0:
            out.append(
                Violation("preference.weight", f"weight {pref.weight} outside [-1.0, +1.0]")
            )
        if pref.derived_from != stmt.id:
            out.append(
                Violation("preference.derivedFrom", "must reference the statement it derives from")
            )
    return out


def _concept_quads(graph: Iri, concept: Concept) -> list[Quad]:
    quads = [
        Quad(graph, concept.id, RDF_TYPE, SKOS_CONCEPT),
        Quad(graph, concept.id, SKOS_PREF_LABEL, Literal(concept.text)),
    ]
    for prop, links in (
        (SKOS_RELATED, concept.related),
        (SKOS_BROADER, concept.broader),
        (SKOS_NARROWER, concept.narrower),
    ):
        quads.extend(Quad(graph, concept.id, prop, link) for link in links)
    return quads


def preference_quads(graph: Iri, pref: Preference) -> list[Quad]:
    """The five-quad preference shape."""
    return [
        Quad(graph, pref.holder, PKG_PREFERENCE, pref.id),
        Quad(graph, pref.id, RDF_TYPE, PKG_PREFERENCE_CLASS),
        Quad(graph, pref.id, PKG_TOPIC, element_node(pref.topic)),
        Quad(graph, pref.id, PKG_WEIGHT, Literal(format_decimal(pref.weight), XSD_DECIMAL)),
        Quad(graph, pref.id, PAV_DERIVED_FROM, pref.derived_from),
    ]


def statement_to_quads(stmt: PkgStatement, owner_graph: Iri) -> list[Quad]:
    """Emit the statement's full reified quad set; deterministic in the
    statement's shape. Raises ValidationFailed on any invariant violation."""
    violations = validate_statement(stmt)
    if violations:
        raise ValidationFailed(violations)

    g = owner_graph
    quads = [
        Quad(g, stmt.id, RDF_TYPE, RDF_STATEMENT),
        Quad(g, stmt.id, DCTERMS_DESCRIPTION, Literal(stmt.annotation)),
        Quad(g, stmt.id, RDF_SUBJECT, element_node(stmt.subject)),
        Quad(g, stmt.id, RDF_PREDICATE, element_node(stmt.predicate)),
        Quad(g, stmt.id, RDF_OBJECT, element_node(stmt.object)),
    ]

    emitted: set[Iri] = set()
    elements: list[SpoElement] = [stmt.subject, stmt.predicate, stmt.object]
    if stmt.preference is not None:
        elements.append(stmt.preference.topic)
    for element in elements:
        if isinstance(element, Concept) and element.id not in emitted:
            emitted.add(element.id)
            quads.extend(_concept_quads(g, element))

    prov = stmt.provenance
    quads.append(Quad(g, stmt.id, PAV_CREATED_BY, prov.created_by))
    quads.append(
        Quad(g, stmt.id, PAV_CREATED_ON, Literal(format_datetime(prov.created_on), XSD_DATETIME))
    )
    if prov.derived_from is not None:
        quads.append(Quad(g, stmt.id, PAV_DERIVED_FROM, prov.derived_from))

    for iri in sorted(stmt.access.read, key=lambda i: i.value):
        quads.append(Quad(g, stmt.id, PKG_READ_ACCESS, iri))
    for iri in sorted(stmt.access.write, key=lambda i: i.value):
        quads.append(Quad(g, stmt.id, PKG_WRITE_ACCESS, iri))

    if stmt.preference is not None:
        quads.extend(preference_quads(g, stmt.preference))

    # Shared concepts may emit the same quad twice; keep first occurrence.
    return list(dict.fromkeys(quads))


def _outgoing(quads: Iterable[Quad], node: Iri) -> dict[Iri, list[Term]]:
    index: dict[Iri, list[Term]] = {}
    for q in quads:
        if q.subject == node:
            index.setdefault(q.predicate, []).append(q.object)
    return index


def _single(index: dict[Iri, list[Term]], prop: Iri) -> Optional[Term]:
    values = index.get(prop, [])
    return values[0] if values else None


def _element_from_quads(quads: list[Quad], node: Term, path: str) -> SpoElement:
    if not isinstance(node, Iri):
        raise StatementStructureError(node, [f"{path} must be an IRI node"])
    out = _outgoing(quads, node)
    if SKOS_CONCEPT not in out.get(RDF_TYPE, []):
        return node
    label = _single(out, SKOS_PREF_LABEL)
    if not isinstance(label, Literal):
        raise StatementStructureError(node, ["skos:prefLabel"])

    def links(prop: Iri) -> tuple[Iri, ...]:
        return tuple(o for o in out.get(prop, []) if isinstance(o, Iri))

    return Concept(
        id=node,
        text=label.lexical,
        related=links(SKOS_RELATED),
        broader=links(SKOS_BROADER),
        narrower=links(SKOS_NARROWER),
    )


def quads_to_statement(quads: list[Quad], statement_id: Iri) -> PkgStatement:
    """Reconstruct a statement from its reified quads (inverse of
    statement_to_quads up to quad ordering). The quad list may contain
    other statements' quads; only those rooted at statement_id are read."""
    out = _outgoing(quads, statement_id)
    missing = []
    if RDF_STATEMENT not in out.get(RDF_TYPE, []):
        missing.append("rdf:type rdf:Statement")
    annotation = _single(out, DCTERMS_DESCRIPTION)
    if not isinstance(annotation, Literal):
        missing.append("dcterms:description")
    subject_node = _single(out, RDF_SUBJECT)
    if subject_node is None:
        missing.append("rdf:subject")
    predicate_node = _single(out, RDF_PREDICATE)
    if predicate_node is None:
        missing.append("rdf:predicate")
    object_node = _single(out, RDF_OBJECT)
    if object_node is None:
        missing.append("rdf:object")
    created_by = _single(out, PAV_CREATED_BY)
    if not isinstance(created_by, Iri):
        missing.append("pav:createdBy")
    created_on = _single(out, PAV_CREATED_ON)
    if not isinstance(created_on, Literal):
        missing.append("pav:createdOn")
    if missing:
        raise StatementStructureError(statement_id, missing)

    derived = _single(out, PAV_DERIVED_FROM)
    provenance = Provenance(
        created_by=created_by,
        created_on=parse_datetime(created_on.lexical),
        derived_from=derived if isinstance(derived, Iri) else None,
    )
    access = AccessPolicy(
        read=frozenset(o for o in out.get(PKG_READ_ACCESS, []) if isinstance(o, Iri)),
        write=frozenset(o for o in out.get(PKG_WRITE_ACCESS, []) if isinstance(o, Iri)),
    )

    subject = _element_from_quads(quads, subject_node, "rdf:subject")
    predicate = _element_from_quads(quads, predicate_node, "rdf:predicate")
    object_ = _element_from_quads(quads, object_node, "rdf:object")

    preference = None
    pref_ids = [
        q.subject
        for q in quads
        if q.predicate == PAV_DERIVED_FROM
        and q.object == statement_id
        and q.subject != statement_id
    ]
    pref_ids = [
        node
        for node in pref_ids
        if PKG_PREFERENCE_CLASS in _outgoing(quads, node).get(RDF_TYPE, [])
    ]
    if len(pref_ids) > 1:
        raise StatementStructureError(statement_id, ["single preference node (found several)"])
    if pref_ids:
        pref_id = pref_ids[0]
        pout = _outgoing(quads, pref_id)
        topic_node = _single(pout, PKG_TOPIC)
        weight = _single(pout, PKG_WEIGHT)
        holder = next(
            (q.subject for q in quads if q.predicate == PKG_PREFERENCE and q.object == pref_id),
            None,
        )
        pref_missing = []
        if topic_node is None:
            pref_missing.append("pkg:topic")
        if not isinstance(weight, Literal):
            pref_missing.append("pkg:weight")
        if holder is None:
            pref_missing.append("pkg:preference link from holder")
        if pref_missing:
            raise StatementStructureError(statement_id, pref_missing)
        preference = Preference(
            id=pref_id,
            holder=holder,
            topic=_element_from_quads(quads, topic_node, "pkg:topic"),
            weight=float(weight.lexical),
            derived_from=statement_id,
        )

    return PkgStatement(
        id=statement_id,
        annotation=annotation.lexical,
        subject=subject,
        predicate=predicate,
        object=object_,
        provenance=provenance,
        access=access,
        preference=preference,
    )


def statement_ids(quads: Iterable[Quad]) -> list[Iri]:
    """All rdf:Statement nodes present in a quad set, sorted."""
    ids = {
        q.subject for q in quads if q.predicate == RDF_TYPE and q.object == RDF_STATEMENT
    }
    return sorted(ids, key=lambda i: i.value)
