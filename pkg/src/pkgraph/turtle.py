"""Turtle subset: prefixes, IRIs, plain/typed/language literals, the ``a``
keyword, and predicate-object lists. Collections and blank-node property
lists are out; skolemized nodes make them unnecessary, and their absence is
what makes export -> import an exact quad-set round-trip.
"""

from __future__ import annotations

import re
from typing import Iterable

from .lexer import TextSyntaxError, Token, TokenStream
from .terms import (
    PREFIXES,
    RDF_LANG_STRING,
    RDF_TYPE,
    XSD_STRING,
    Iri,
    Literal,
    Term,
    escape_literal,
    term_key,
)

Triple = tuple[Iri, Iri, Term]


class TurtleParseError(TextSyntaxError):
    pass


_LOCAL_SAFE = re.compile(r"^[A-Za-z_][A-Za-z0-9_\-]*$")

# Longest namespace first so nested prefixes resolve to the tightest match.
_ORDERED_PREFIXES = sorted(PREFIXES.items(), key=lambda kv: -len(kv[1]))


def _render_iri(iri: Iri) -> str:
    for prefix, ns in _ORDERED_PREFIXES:
        if iri.value.startswith(ns):
            local = iri.value[len(ns):]
            if local == "" or _LOCAL_SAFE.match(local):
                return f"{prefix}:{local}"
    return f"<{iri.value}>"


def _render_term(term: Term) -> str:
    if isinstance(term, Iri):
        return _render_iri(term)
    quoted = f'"{escape_literal(term.lexical)}"'
    if term.language is not None:
        return f"{quoted}@{term.language}"
    if term.datatype == XSD_STRING:
        return quoted
    return f"{quoted}^^{_render_iri(term.datatype)}"


def serialize_turtle(triples: Iterable[Triple]) -> str:
    lines = [f"@prefix {p}: <{ns}> ." for p, ns in PREFIXES.items()]
    by_subject: dict[Iri, dict[Iri, list[Term]]] = {}
    for s, p, o in triples:
        by_subject.setdefault(s, {}).setdefault(p, []).append(o)

    for subject in sorted(by_subject, key=lambda s: term_key(s)):
        lines.append("")
        lines.append(_render_iri(subject))
        predicates = sorted(
            by_subject[subject],
            key=lambda p: (p != RDF_TYPE, term_key(p)),
        )
        for i, predicate in enumerate(predicates):
            verb = "a" if predicate == RDF_TYPE else _render_iri(predicate)
            objects = sorted(by_subject[subject][predicate], key=term_key)
            rendered = ", ".join(_render_term(o) for o in objects)
            terminator = " ." if i == len(predicates) - 1 else " ;"
            lines.append(f"    {verb} {rendered}{terminator}")
    return "\n".join(lines) + "\n"


class _TurtleParser:
    def __init__(self, text: str):
        try:
            self.stream = TokenStream(text)
        except TextSyntaxError as exc:
            raise TurtleParseError(str(exc).rsplit(" at line", 1)[0], exc.line, exc.column) from None
        self.prefixes: dict[str, str] = {}

    def parse(self) -> list[Triple]:
        triples: list[Triple] = []
        while self.stream.peek().kind != "EOF":
            if self.stream.peek().kind == "ATPREFIX":
                self.stream.next()
                self._prefix_declaration(sparql_style=False)
            elif self.stream.at_keyword("PREFIX"):
                self.stream.next()
                self._prefix_declaration(sparql_style=True)
            else:
                triples.extend(self._triples())
                self.stream.expect("DOT", "'.'")
        return triples

    def _prefix_declaration(self, sparql_style: bool) -> None:
        token = self.stream.expect("PNAME", "prefix declaration")
        prefix, _, local = token.value.partition(":")
        if local:
            raise TurtleParseError("prefix declaration takes a bare prefix", token.line, token.column)
        iriref = self.stream.expect("IRIREF", "namespace IRI")
        self.prefixes[prefix] = iriref.value
        if not sparql_style:
            self.stream.expect("DOT", "'.'")

    def _triples(self) -> list[Triple]:
        subject = self._iri("subject")
        triples: list[Triple] = []
        while True:
            predicate = self._verb()
            while True:
                triples.append((subject, predicate, self._object()))
                if self.stream.peek().kind == "COMMA":
                    self.stream.next()
                    continue
                break
            if self.stream.peek().kind == "SEMI":
                while self.stream.peek().kind == "SEMI":
                    self.stream.next()
                if self.stream.peek().kind == "DOT":
                    break  # trailing ';' before '.'
                continue
            break
        return triples

    def _verb(self) -> Iri:
        token = self.stream.peek()
        if token.kind == "WORD" and token.value == "a":
            self.stream.next()
            return RDF_TYPE
        return self._iri("predicate")

    def _iri(self, what: str) -> Iri:
        token = self.stream.peek()
        if token.kind == "IRIREF":
            self.stream.next()
            return self._absolute(token)
        if token.kind == "PNAME":
            self.stream.next()
            return self._expand_pname(token)
        raise TurtleParseError(f"expected {what} IRI, found {token.value!r}", token.line, token.column)

    def _absolute(self, token: Token) -> Iri:
        if ":" not in token.value:
            raise TurtleParseError("relative IRIs are not supported", token.line, token.column)
        return Iri(token.value)

    def _expand_pname(self, token: Token) -> Iri:
        prefix, _, local = token.value.partition(":")
        if prefix not in self.prefixes:
            raise TurtleParseError(f"undeclared prefix {prefix!r}", token.line, token.column)
        return Iri(self.prefixes[prefix] + local)

    def _object(self) -> Term:
        token = self.stream.peek()
        if token.kind == "STRING":
            self.stream.next()
            return self._literal_tail(token.value)
        return self._iri("object")

    def _literal_tail(self, lexical: str) -> Literal:
        token = self.stream.peek()
        if token.kind == "LANGTAG":
            self.stream.next()
            return Literal(lexical, RDF_LANG_STRING, token.value[1:])
        if token.kind == "HATHAT":
            self.stream.next()
            return Literal(lexical, self._iri("datatype"))
        return Literal(lexical, XSD_STRING)


def parse_turtle(text: str) -> list[Triple]:
    """Parse a Turtle subset document; raises TurtleParseError with line and
    column on any syntax problem (including undeclared prefixes)."""
    try:
        return _TurtleParser(text).parse()
    except TurtleParseError:
        raise
    except TextSyntaxError as exc:
        raise TurtleParseError(str(exc).rsplit(" at line", 1)[0], exc.line, exc.column) from None
