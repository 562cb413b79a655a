"""The connector between resolved actions and the store: builds queries
from intents, executes them, and carries the generated query text back for
display.

Delete cascade policy: a statement owns its preference node; concept nodes
are shared and garbage-collected when nothing references them anymore.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .nl2pkg import Intent
from .sparql import query_to_text
from .store import (
    DeleteWhereQuery,
    InsertDataQuery,
    QuadStore,
    SelectQuery,
    TriplePattern,
    Variable,
)
from .terms import (
    PAV_DERIVED_FROM,
    PKG_PREFERENCE,
    PKG_PREFERENCE_CLASS,
    PKG_TOPIC,
    RDF_OBJECT,
    RDF_PREDICATE,
    RDF_STATEMENT,
    RDF_SUBJECT,
    RDF_TYPE,
    SKOS_CONCEPT,
    Iri,
    Quad,
)
from .vocabulary import (
    Concept,
    PkgStatement,
    SpoElement,
    preference_quads,
    statement_ids,
    statement_to_quads,
    quads_to_statement,
)


class UnsupportedActionError(ValueError):
    pass


PatternElement = Union[Iri, str, None]


@dataclass(frozen=True)
class StatementPattern:
    """S/P/O constraints for GET/DELETE. None is a wildcard; an IRI matches
    an element's node exactly; text matches a resolved IRI's serialization
    exactly or a concept label case-insensitively."""

    subject: PatternElement = None
    predicate: PatternElement = None
    object: PatternElement = None


@dataclass(frozen=True)
class PkgAction:
    intent: Intent
    statement: Optional[PkgStatement] = None
    pattern: Optional[StatementPattern] = None

    def __post_init__(self) -> None:
        if self.intent == Intent.UNKNOWN and (self.statement or self.pattern):
            raise ValueError("UNKNOWN actions carry no payload")
        if self.intent == Intent.ADD and self.statement is None:
            raise ValueError("ADD actions carry a statement")
        if self.intent in (Intent.GET, Intent.DELETE) and self.pattern is None:
            raise ValueError(f"{self.intent.value} actions carry a pattern")

    @classmethod
    def add(cls, statement: PkgStatement) -> "PkgAction":
        return cls(Intent.ADD, statement=statement)

    @classmethod
    def get(cls, pattern: StatementPattern = StatementPattern()) -> "PkgAction":
        return cls(Intent.GET, pattern=pattern)

    @classmethod
    def delete(cls, pattern: StatementPattern = StatementPattern()) -> "PkgAction":
        return cls(Intent.DELETE, pattern=pattern)


@dataclass(frozen=True)
class ActionResult:
    intent: Intent
    query: str
    result: Union[Iri, list[PkgStatement], int]


def _element_matches(element: SpoElement, want: PatternElement) -> bool:
    if want is None:
        return True
    if isinstance(want, Iri):
        if isinstance(element, Concept):
            return element.id == want
        return element == want
    if isinstance(element, Concept):
        return element.text.casefold() == want.casefold()
    return element.value == want


class PkgConnector:
    def __init__(self, store: QuadStore):
        self.store = store

    def build_query(
        self, action: PkgAction, owner_graph: Iri
    ) -> Union[SelectQuery, InsertDataQuery]:
        """ADD becomes INSERT DATA of the statement's quads; GET and DELETE
        share the statement-locating SELECT (text constraints are applied
        when results are materialized, the query subset has no string
        predicates)."""
        if action.intent == Intent.UNKNOWN:
            raise UnsupportedActionError("UNKNOWN intent cannot be executed")
        if action.intent == Intent.ADD:
            return InsertDataQuery(tuple(statement_to_quads(action.statement, owner_graph)))
        return self.locating_select(action.pattern, owner_graph)

    def locating_select(self, pattern: StatementPattern, owner_graph: Iri) -> SelectQuery:
        st = Variable("statement")
        patterns = [TriplePattern(st, RDF_TYPE, RDF_STATEMENT)]
        for prop, want in (
            (RDF_SUBJECT, pattern.subject),
            (RDF_PREDICATE, pattern.predicate),
            (RDF_OBJECT, pattern.object),
        ):
            if isinstance(want, Iri):
                patterns.append(TriplePattern(st, prop, want))
        return SelectQuery(projected=("statement",), graph=owner_graph, patterns=tuple(patterns))

    def locate(self, pattern: StatementPattern, owner_graph: Iri) -> list[PkgStatement]:
        """Reconstructed statements matching the pattern, ordered by id."""
        select = self.locating_select(pattern, owner_graph)
        table = self.store.execute_select(select)
        quads = self.store.graph_quads(owner_graph)
        statements = []
        for (statement_id,) in table.rows:
            stmt = quads_to_statement(quads, statement_id)
            if (
                _element_matches(stmt.subject, pattern.subject)
                and _element_matches(stmt.predicate, pattern.predicate)
                and _element_matches(stmt.object, pattern.object)
            ):
                statements.append(stmt)
        return statements

    def execute_action(self, action: PkgAction, owner_graph: Iri) -> ActionResult:
        if action.intent == Intent.UNKNOWN:
            raise UnsupportedActionError("UNKNOWN intent cannot be executed")

        if action.intent == Intent.ADD:
            insert = self.build_query(action, owner_graph)
            text = query_to_text(insert)
            self.store.execute_update(insert)
            return ActionResult(Intent.ADD, text, action.statement.id)

        select = self.locating_select(action.pattern, owner_graph)
        if action.intent == Intent.GET:
            return ActionResult(
                Intent.GET, query_to_text(select), self.locate(action.pattern, owner_graph)
            )

        statements = self.locate(action.pattern, owner_graph)
        texts = [query_to_text(select)]
        for stmt in statements:
            texts.append(query_to_text(statement_delete_query(stmt.id, owner_graph)))
            self.delete_statement(stmt.id, owner_graph)
        return ActionResult(Intent.DELETE, "\n".join(texts), len(statements))

    def delete_statement(self, statement_id: Iri, owner_graph: Iri) -> None:
        """Remove the statement's reification, its preference nodes, and any
        concept nodes left unreferenced afterwards. One store mutation."""
        doomed: set[Quad] = set(self._outgoing(owner_graph, statement_id))

        for pref_id in self._preference_nodes(owner_graph, statement_id):
            doomed.update(self._outgoing(owner_graph, pref_id))
            for binding in self.store.match(
                owner_graph, TriplePattern(Variable("h"), PKG_PREFERENCE, pref_id)
            ):
                doomed.add(Quad(owner_graph, binding["h"], PKG_PREFERENCE, pref_id))

        # Concepts this statement references; drop each one whose remaining
        # references are all in the doomed set, to a fixpoint (a doomed
        # concept's skos links may be the last references to another).
        candidates = self._referenced_concepts(owner_graph, doomed)
        changed = True
        while changed:
            changed = False
            for concept in sorted(candidates, key=lambda c: c.value):
                outgoing = set(self._outgoing(owner_graph, concept))
                if outgoing <= doomed:
                    continue  # already scheduled
                references = {
                    Quad(owner_graph, b["s"], b["p"], concept)
                    for b in self.store.match(
                        owner_graph, TriplePattern(Variable("s"), Variable("p"), concept)
                    )
                }
                if references <= doomed:
                    doomed.update(outgoing)
                    changed = True
        self.store.remove(sorted(doomed, key=lambda q: (q.subject.value, q.predicate.value)))

    def _outgoing(self, graph: Iri, node: Iri) -> list[Quad]:
        return [
            Quad(graph, node, b["p"], b["o"])
            for b in self.store.match(graph, TriplePattern(node, Variable("p"), Variable("o")))
        ]

    def _preference_nodes(self, graph: Iri, statement_id: Iri) -> list[Iri]:
        nodes = []
        for binding in self.store.match(
            graph, TriplePattern(Variable("pref"), PAV_DERIVED_FROM, statement_id)
        ):
            node = binding["pref"]
            if isinstance(node, Iri) and self.store.match(
                graph, TriplePattern(node, RDF_TYPE, PKG_PREFERENCE_CLASS)
            ):
                nodes.append(node)
        return sorted(nodes, key=lambda n: n.value)

    def _referenced_concepts(self, graph: Iri, doomed: set[Quad]) -> set[Iri]:
        concepts = set()
        for quad in doomed:
            if quad.predicate in (RDF_SUBJECT, RDF_PREDICATE, RDF_OBJECT, PKG_TOPIC):
                node = quad.object
                if isinstance(node, Iri) and self.store.match(
                    graph, TriplePattern(node, RDF_TYPE, SKOS_CONCEPT)
                ):
                    concepts.add(node)
        return concepts

    def derive_preference_quads(self, stmt: PkgStatement, owner_graph: Iri) -> list[Quad]:
        """The five-quad preference shape for a statement, empty when the
        statement holds no preference."""
        if stmt.preference is None:
            return []
        return preference_quads(owner_graph, stmt.preference)

    def all_statements(self, owner_graph: Iri) -> list[PkgStatement]:
        quads = self.store.graph_quads(owner_graph)
        return [quads_to_statement(quads, sid) for sid in statement_ids(quads)]


def statement_delete_query(statement_id: Iri, owner_graph: Iri) -> DeleteWhereQuery:
    return DeleteWhereQuery(
        graph=owner_graph,
        patterns=(TriplePattern(statement_id, Variable("p"), Variable("o")),),
    )
