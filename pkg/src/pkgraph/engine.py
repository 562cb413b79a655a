"""Owner-scoped orchestration of the full pipeline and the structured
operations behind the REST surface. Holds the store, the annotator, the
linker, and per-owner id minters; everything else is stateless."""

from __future__ import annotations

import random
from typing import Mapping, Optional, Union

from .connector import ActionResult, PkgAction, PkgConnector, StatementPattern
from .linking import (
    EMPTY_RELATIONS,
    EntityLinker,
    PersonalAliasTable,
    RelationIriTable,
    resolve,
    resolve_pattern_element,
    resolve_relation_pattern,
)
from .minting import IdMinter
from .nl2pkg import AnnotatedUtterance, Annotator, Intent, RuleAnnotator, validate_annotation
from .sparql import parse_query
from .store import QuadStore, SelectQuery, TriplePattern, Variable
from .terms import PKG_ALIAS, PKG_READ_ACCESS, PKG_WRITE_ACCESS, Iri, Literal, Quad
from .vocabulary import (
    AccessPolicy,
    Concept,
    PkgStatement,
    Preference,
    Provenance,
    SpoElement,
    ValidationFailed,
    Violation,
    element_node,
    format_decimal,
    quads_to_statement,
    utc_now,
    validate_statement,
)


class UtteranceNotUnderstood(ValueError):
    """The annotation gate rejected the utterance (UNKNOWN intent or an
    invariant violation); carries the annotation for the response body."""

    def __init__(self, annotation: AnnotatedUtterance, violations: list[Violation] = ()):  # type: ignore[assignment]
        self.annotation = annotation
        self.violations = list(violations)
        super().__init__("utterance not understood")


class PkgEngine:
    def __init__(
        self,
        *,
        annotator: Optional[Annotator] = None,
        linker: Optional[EntityLinker] = None,
        link_threshold: float = 0.5,
        relations: RelationIriTable = EMPTY_RELATIONS,
        clock=utc_now,
        seed: Optional[int] = None,
    ):
        self.store = QuadStore()
        self.connector = PkgConnector(self.store)
        self.annotator = annotator if annotator is not None else RuleAnnotator()
        self.linker = linker
        self.link_threshold = link_threshold
        self.relations = relations
        self.clock = clock
        self._seed_rng = random.Random(seed) if seed is not None else None
        self._minters: dict[Iri, IdMinter] = {}

    # -- owners ---------------------------------------------------------

    def register_owner(self, owner: Iri, aliases: Optional[Mapping[str, Iri]] = None) -> None:
        self.store.register_owner(owner)
        if aliases:
            table = PersonalAliasTable.from_pairs(owner, aliases)
            self.store.insert(table.quads(owner))

    def minter(self, owner: Iri) -> IdMinter:
        if owner not in self._minters:
            seed = self._seed_rng.getrandbits(64) if self._seed_rng is not None else None
            self._minters[owner] = IdMinter(owner, seed)
        return self._minters[owner]

    def alias_table(self, owner: Iri) -> PersonalAliasTable:
        pairs = {}
        for binding in self.store.match(
            owner, TriplePattern(Variable("who"), PKG_ALIAS, Variable("alias"))
        ):
            alias = binding["alias"]
            if isinstance(alias, Literal) and isinstance(binding["who"], Iri):
                pairs[alias.lexical] = binding["who"]
        return PersonalAliasTable.from_pairs(owner, pairs)

    # -- the natural-language path --------------------------------------

    def annotate_and_resolve(self, owner: Iri, agent: Iri, text: str) -> tuple[AnnotatedUtterance, PkgAction]:
        """Stages 1 and 2 without execution: annotate, gate, resolve into an
        executable action. Raises UtteranceNotUnderstood at the gate."""
        annotation = self.annotator.annotate(text, owner)
        violations = validate_annotation(annotation)
        if violations:
            raise UtteranceNotUnderstood(annotation, violations)
        if annotation.intent == Intent.UNKNOWN:
            raise UtteranceNotUnderstood(annotation)

        table = self.alias_table(owner)
        if annotation.intent == Intent.ADD:
            statement = resolve(
                annotation,
                table,
                minter=self.minter(owner),
                agent=agent,
                clock=self.clock,
                linker=self.linker,
                threshold=self.link_threshold,
                relations=self.relations,
            )
            return annotation, PkgAction.add(statement)

        pattern = StatementPattern(
            subject=resolve_pattern_element(
                annotation.subject_text, table, linker=self.linker, threshold=self.link_threshold
            ),
            predicate=resolve_relation_pattern(annotation.predicate_text, self.relations),
            object=resolve_pattern_element(
                annotation.object_text, table, linker=self.linker, threshold=self.link_threshold
            ),
        )
        if annotation.intent == Intent.GET:
            return annotation, PkgAction.get(pattern)
        return annotation, PkgAction.delete(pattern)

    def process_utterance(
        self, owner: Iri, agent: Iri, text: str
    ) -> tuple[AnnotatedUtterance, ActionResult]:
        """Full pipeline with owner-level powers (no per-service filtering);
        the REST layer drives the stages itself to enforce access."""
        annotation, action = self.annotate_and_resolve(owner, agent, text)
        return annotation, self.connector.execute_action(action, owner)

    # -- structured operations -------------------------------------------

    def build_element(self, owner: Iri, value: Union[Iri, str]) -> SpoElement:
        if isinstance(value, Iri):
            return value
        return Concept(id=self.minter(owner).mint("concept"), text=value)

    def add_statement(
        self,
        owner: Iri,
        agent: Iri,
        *,
        annotation: str,
        subject: Union[Iri, str],
        predicate: Union[Iri, str],
        object: Union[Iri, str],
        preference_weight: Optional[float] = None,
        read: frozenset[Iri] = frozenset(),
        write: frozenset[Iri] = frozenset(),
    ) -> ActionResult:
        """Structured add: text elements become concepts; a weight becomes a
        preference on the object element."""
        statement_id = self.minter(owner).mint("stmt")
        subject_el = self.build_element(owner, subject)
        predicate_el = self.build_element(owner, predicate)
        object_el = self.build_element(owner, object)
        preference = None
        if preference_weight is not None:
            preference = Preference(
                id=self.minter(owner).mint("pref"),
                holder=element_node(subject_el),
                topic=object_el,
                weight=preference_weight,
                derived_from=statement_id,
            )
        statement = PkgStatement(
            id=statement_id,
            annotation=annotation,
            subject=subject_el,
            predicate=predicate_el,
            object=object_el,
            provenance=Provenance(created_by=agent, created_on=self.clock()),
            access=AccessPolicy(read=read, write=write),
            preference=preference,
        )
        return self.connector.execute_action(PkgAction.add(statement), owner)

    def get_statements(self, owner: Iri, pattern: StatementPattern = StatementPattern()) -> ActionResult:
        return self.connector.execute_action(PkgAction.get(pattern), owner)

    def get_statement(self, owner: Iri, statement_id: Iri) -> Optional[PkgStatement]:
        quads = self.store.graph_quads(owner)
        try:
            return quads_to_statement(quads, statement_id)
        except ValueError:
            return None

    def delete_statements(self, owner: Iri, statement_ids: list[Iri]) -> int:
        for statement_id in statement_ids:
            self.connector.delete_statement(statement_id, owner)
        return len(statement_ids)

    def set_access(self, owner: Iri, statement_id: Iri, policy: AccessPolicy) -> PkgStatement:
        statement = self.get_statement(owner, statement_id)
        if statement is None:
            raise KeyError(statement_id.value)
        updated = PkgStatement(
            id=statement.id,
            annotation=statement.annotation,
            subject=statement.subject,
            predicate=statement.predicate,
            object=statement.object,
            provenance=statement.provenance,
            access=policy,
            preference=statement.preference,
        )
        violations = validate_statement(updated, owner=owner)
        if violations:
            raise ValidationFailed(violations)
        old = [
            Quad(owner, statement_id, prop, iri)
            for prop, iris in ((PKG_READ_ACCESS, statement.access.read), (PKG_WRITE_ACCESS, statement.access.write))
            for iri in iris
        ]
        new = [
            Quad(owner, statement_id, prop, iri)
            for prop, iris in ((PKG_READ_ACCESS, policy.read), (PKG_WRITE_ACCESS, policy.write))
            for iri in iris
        ]
        if old:
            self.store.remove(old)
        if new:
            self.store.insert(new)
        return updated

    def preferences(self, owner: Iri, topic: Union[Iri, str, None] = None) -> list[Preference]:
        out = []
        for statement in self.connector.all_statements(owner):
            pref = statement.preference
            if pref is None:
                continue
            if topic is not None and not _topic_matches(pref.topic, topic):
                continue
            out.append(pref)
        return sorted(out, key=lambda p: p.id.value)

    def preferences_with_sources(
        self, owner: Iri, topic: Union[Iri, str, None] = None
    ) -> list[tuple[Preference, PkgStatement]]:
        out = []
        for statement in self.connector.all_statements(owner):
            pref = statement.preference
            if pref is None:
                continue
            if topic is not None and not _topic_matches(pref.topic, topic):
                continue
            out.append((pref, statement))
        return sorted(out, key=lambda pair: pair[0].id.value)

    # -- views -----------------------------------------------------------

    def graph_view(self, owner: Iri, statements: Optional[list[PkgStatement]] = None) -> dict:
        """Node-link document for the client: statements, concepts, resolved
        entities, preference nodes, and the owner."""
        if statements is None:
            statements = self.connector.all_statements(owner)
        nodes: dict[str, dict] = {}
        edges: set[tuple[str, str, str]] = set()

        def add_node(node_id: str, label: str, kind: str) -> None:
            nodes.setdefault(node_id, {"id": node_id, "label": label, "kind": kind})

        def element_id(element: SpoElement) -> str:
            node = element_node(element)
            if isinstance(element, Concept):
                add_node(node.value, element.text, "concept")
            elif node == owner:
                add_node(node.value, _short_label(node), "owner")
            else:
                add_node(node.value, _short_label(node), "entity")
            return node.value

        add_node(owner.value, _short_label(owner), "owner")
        for statement in statements:
            add_node(statement.id.value, statement.annotation, "statement")
            for prop, element in (
                ("subject", statement.subject),
                ("predicate", statement.predicate),
                ("object", statement.object),
            ):
                edges.add((statement.id.value, element_id(element), prop))
            pref = statement.preference
            if pref is not None:
                add_node(pref.id.value, format_decimal(pref.weight), "preference")
                holder = pref.holder
                if holder.value not in nodes:
                    add_node(holder.value, _short_label(holder), "entity")
                edges.add((holder.value, pref.id.value, "preference"))
                edges.add((pref.id.value, element_id(pref.topic), "topic"))
                edges.add((pref.id.value, statement.id.value, "derivedFrom"))

        return {
            "nodes": sorted(nodes.values(), key=lambda n: n["id"]),
            "edges": [
                {"source": s, "target": t, "label": label}
                for s, t, label in sorted(edges)
            ],
        }

    def export_turtle(self, owner: Iri) -> str:
        return self.store.export_turtle(owner)

    def run_select_text(self, owner: Iri, text: str):
        """Parse and execute a SELECT in the textual subset against the
        owner's graph (the CLI query command)."""
        query = parse_query(text, default_graph=owner)
        if not isinstance(query, SelectQuery):
            return self.store.execute_update(query)
        return self.store.execute_select(query)


def _topic_matches(topic: SpoElement, want: Union[Iri, str]) -> bool:
    if isinstance(want, Iri):
        return element_node(topic) == want
    if isinstance(topic, Concept):
        return topic.text.casefold() == want.casefold()
    return topic.value == want


def _short_label(iri: Iri) -> str:
    value = iri.value.rstrip("/")
    for sep in ("#", "/"):
        if sep in value:
            tail = value.rsplit(sep, 1)[1]
            if tail:
                return tail
    return value
