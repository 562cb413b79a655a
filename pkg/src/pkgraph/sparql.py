"""Textual form of the query subset: SELECT with a basic graph pattern and
equality filters, INSERT DATA, and DELETE WHERE. Keywords are matched case
insensitively and whitespace is free-form.

    SELECT ?v ... WHERE { s p o . ... FILTER(?v = term) }
    INSERT DATA { GRAPH <g> { s p o . ... } }
    DELETE WHERE { GRAPH <g> { s p o . ... } }

A SELECT names no graph in text; the caller supplies the owner graph.
"""

from __future__ import annotations

from typing import Optional, Union

from .lexer import TextSyntaxError, TokenStream
from .store import (
    DeleteWhereQuery,
    InsertDataQuery,
    SelectQuery,
    TriplePattern,
    Variable,
)
from .terms import (
    PREFIXES,
    RDF_LANG_STRING,
    RDF_TYPE,
    XSD_STRING,
    Iri,
    Literal,
    Quad,
    Term,
    escape_literal,
)

ParsedQuery = Union[SelectQuery, InsertDataQuery, DeleteWhereQuery]

PatternTerm = Union[Iri, Literal, Variable]


class QueryParseError(TextSyntaxError):
    pass


class _QueryParser:
    def __init__(self, text: str):
        self.stream = TokenStream(text)
        self.prefixes = dict(PREFIXES)

    def parse(self, default_graph: Optional[Iri]) -> ParsedQuery:
        while self.stream.at_keyword("PREFIX"):
            self.stream.next()
            token = self.stream.expect("PNAME", "prefix declaration")
            prefix, _, local = token.value.partition(":")
            if local:
                raise QueryParseError("prefix declaration takes a bare prefix", token.line, token.column)
            self.prefixes[prefix] = self.stream.expect("IRIREF", "namespace IRI").value

        if self.stream.at_keyword("SELECT"):
            self.stream.next()
            query = self._select(default_graph)
        elif self.stream.at_keyword("INSERT"):
            self.stream.next()
            self.stream.expect_keyword("DATA")
            query = self._insert_data()
        elif self.stream.at_keyword("DELETE"):
            self.stream.next()
            self.stream.expect_keyword("WHERE")
            query = self._delete_where()
        else:
            raise self.stream.error("expected SELECT, INSERT DATA, or DELETE WHERE")
        self.stream.expect("EOF", "end of query")
        return query

    def _select(self, default_graph: Optional[Iri]) -> SelectQuery:
        projected: list[str] = []
        while self.stream.peek().kind == "VAR":
            projected.append(self.stream.next().value[1:])
        if not projected:
            raise self.stream.error("SELECT needs at least one ?variable")
        self.stream.expect_keyword("WHERE")
        patterns, filters = self._group()
        if default_graph is None:
            raise self.stream.error("no graph supplied for SELECT")
        return SelectQuery(
            projected=tuple(projected),
            graph=default_graph,
            patterns=tuple(patterns),
            filters=tuple(filters),
        )

    def _group(self) -> tuple[list[TriplePattern], list[tuple[str, Term]]]:
        self.stream.expect("LBRACE", "'{'")
        patterns: list[TriplePattern] = []
        filters: list[tuple[str, Term]] = []
        while self.stream.peek().kind != "RBRACE":
            if self.stream.at_keyword("FILTER"):
                self.stream.next()
                self.stream.expect("LPAREN", "'('")
                var = self.stream.expect("VAR", "?variable").value[1:]
                self.stream.expect("EQ", "'='")
                term = self._term()
                if isinstance(term, Variable):
                    raise self.stream.error("filter compares a variable to a ground term")
                self.stream.expect("RPAREN", "')'")
                filters.append((var, term))
            else:
                patterns.append(TriplePattern(self._term(), self._term(), self._term()))
            if self.stream.peek().kind == "DOT":
                self.stream.next()
        self.stream.expect("RBRACE", "'}'")
        return patterns, filters

    def _graph_block(self) -> tuple[Iri, list[TriplePattern]]:
        self.stream.expect("LBRACE", "'{'")
        self.stream.expect_keyword("GRAPH")
        graph = self._iri()
        patterns, filters = self._group()
        if filters:
            raise self.stream.error("FILTER is not allowed in an update")
        self.stream.expect("RBRACE", "'}'")
        return graph, patterns

    def _insert_data(self) -> InsertDataQuery:
        graph, patterns = self._graph_block()
        quads = []
        for p in patterns:
            if p.variables():
                raise self.stream.error("INSERT DATA quads must be ground")
            if not isinstance(p.subject, Iri) or not isinstance(p.predicate, Iri):
                raise self.stream.error("subject and predicate must be IRIs")
            quads.append(Quad(graph, p.subject, p.predicate, p.object))
        return InsertDataQuery(tuple(quads))

    def _delete_where(self) -> DeleteWhereQuery:
        graph, patterns = self._graph_block()
        return DeleteWhereQuery(graph, tuple(patterns))

    def _iri(self) -> Iri:
        token = self.stream.peek()
        if token.kind == "IRIREF":
            self.stream.next()
            if ":" not in token.value:
                raise QueryParseError("relative IRIs are not supported", token.line, token.column)
            return Iri(token.value)
        if token.kind == "PNAME":
            self.stream.next()
            prefix, _, local = token.value.partition(":")
            if prefix not in self.prefixes:
                raise QueryParseError(f"undeclared prefix {prefix!r}", token.line, token.column)
            return Iri(self.prefixes[prefix] + local)
        raise QueryParseError(f"expected an IRI, found {token.value!r}", token.line, token.column)

    def _term(self) -> PatternTerm:
        token = self.stream.peek()
        if token.kind == "VAR":
            self.stream.next()
            return Variable(token.value[1:])
        if token.kind == "STRING":
            self.stream.next()
            nxt = self.stream.peek()
            if nxt.kind == "LANGTAG":
                self.stream.next()
                return Literal(token.value, RDF_LANG_STRING, nxt.value[1:])
            if nxt.kind == "HATHAT":
                self.stream.next()
                return Literal(token.value, self._iri())
            return Literal(token.value, XSD_STRING)
        if token.kind == "WORD" and token.value == "a":
            self.stream.next()
            return RDF_TYPE
        return self._iri()


def parse_query(text: str, *, default_graph: Optional[Iri] = None) -> ParsedQuery:
    """Parse query text; raises QueryParseError with line/column on any
    syntax problem."""
    try:
        return _QueryParser(text).parse(default_graph)
    except QueryParseError:
        raise
    except TextSyntaxError as exc:
        raise QueryParseError(str(exc).rsplit(" at line", 1)[0], exc.line, exc.column) from None


_ORDERED_PREFIXES = sorted(PREFIXES.items(), key=lambda kv: -len(kv[1]))


def _render_iri(iri: Iri, used: set[str]) -> str:
    for prefix, ns in _ORDERED_PREFIXES:
        if iri.value.startswith(ns):
            local = iri.value[len(ns):]
            if local == "" or local.replace("_", "").replace("-", "").isalnum():
                used.add(prefix)
                return f"{prefix}:{local}"
    return f"<{iri.value}>"


def _render_term(term: Union[Term, Variable], used: set[str]) -> str:
    if isinstance(term, Variable):
        return f"?{term.name}"
    if isinstance(term, Iri):
        return _render_iri(term, used)
    quoted = f'"{escape_literal(term.lexical)}"'
    if term.language is not None:
        return f"{quoted}@{term.language}"
    if term.datatype == XSD_STRING:
        return quoted
    return f"{quoted}^^{_render_iri(term.datatype, used)}"


def _prologue(used: set[str]) -> list[str]:
    return [f"PREFIX {p}: <{PREFIXES[p]}>" for p in sorted(used)]


def query_to_text(query: ParsedQuery) -> str:
    """Render a query back to its textual form (parseable by parse_query);
    used for the outcome display carried in action results."""
    used: set[str] = set()
    if isinstance(query, SelectQuery):
        body = [
            "  " + " ".join(_render_term(t, used) for t in (p.subject, p.predicate, p.object)) + " ."
            for p in query.patterns
        ]
        body += [f"  FILTER(?{v} = {_render_term(t, used)})" for v, t in query.filters]
        head = "SELECT " + " ".join(f"?{v}" for v in query.projected) + " WHERE {"
        return "\n".join(_prologue(used) + [head] + body + ["}"])
    if isinstance(query, InsertDataQuery):
        graph = query.quads[0].graph if query.quads else None
        body = [
            "    " + " ".join(_render_term(t, used) for t in (q.subject, q.predicate, q.object)) + " ."
            for q in query.quads
        ]
        graph_text = _render_iri(graph, used) if graph else "<urn:empty>"
        lines = [f"INSERT DATA {{ GRAPH {graph_text} {{"] + body + ["} }"]
        return "\n".join(_prologue(used) + lines)
    if isinstance(query, DeleteWhereQuery):
        body = [
            "    " + " ".join(_render_term(t, used) for t in (p.subject, p.predicate, p.object)) + " ."
            for p in query.patterns
        ]
        graph_text = _render_iri(query.graph, used)
        lines = [f"DELETE WHERE {{ GRAPH {graph_text} {{"] + body + ["} }"]
        return "\n".join(_prologue(used) + lines)
    raise TypeError(f"not a query: {query!r}")
