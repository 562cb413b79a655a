"""RDF term and quad model.

Terms are immutable values: an ``Iri`` or a ``Literal``. Engine-minted
(skolem) nodes are ordinary IRIs under the owner's namespace, so quad sets
survive export/import exactly instead of merely up to isomorphism.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

# Absolute IRI: a scheme followed by characters legal inside an IRIREF
# (no whitespace, no <>"{}|^`\ which Turtle forbids unencoded).
_IRI_RE = re.compile(r'^[A-Za-z][A-Za-z0-9+.\-]*:[^\x00-\x20<>"{}|^`\\]*$')


@dataclass(frozen=True)
class Iri:
    value: str

    def __str__(self) -> str:
        return self.value


def is_valid_iri(iri: Iri) -> bool:
    """True iff the IRI is absolute and free of characters illegal in an IRIREF."""
    return isinstance(iri, Iri) and bool(_IRI_RE.match(iri.value))


# Fixed namespace table. Every vocabulary property the engine emits comes
# from here; anything else in a quad is user-supplied.
PKG = "http://w3id.org/pkg/"
RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
SKOS = "http://www.w3.org/2004/02/skos/core#"
PAV = "http://purl.org/pav/"
DCTERMS = "http://purl.org/dc/terms/"
XSD = "http://www.w3.org/2001/XMLSchema#"

PREFIXES: dict[str, str] = {
    "pkg": PKG,
    "rdf": RDF,
    "skos": SKOS,
    "pav": PAV,
    "dcterms": DCTERMS,
    "xsd": XSD,
}

RDF_TYPE = Iri(RDF + "type")
RDF_STATEMENT = Iri(RDF + "Statement")
RDF_SUBJECT = Iri(RDF + "subject")
RDF_PREDICATE = Iri(RDF + "predicate")
RDF_OBJECT = Iri(RDF + "object")
RDF_LANG_STRING = Iri(RDF + "langString")

SKOS_CONCEPT = Iri(SKOS + "Concept")
SKOS_PREF_LABEL = Iri(SKOS + "prefLabel")
SKOS_RELATED = Iri(SKOS + "related")
SKOS_BROADER = Iri(SKOS + "broader")
SKOS_NARROWER = Iri(SKOS + "narrower")

PAV_CREATED_BY = Iri(PAV + "createdBy")
PAV_CREATED_ON = Iri(PAV + "createdOn")
PAV_DERIVED_FROM = Iri(PAV + "derivedFrom")

DCTERMS_DESCRIPTION = Iri(DCTERMS + "description")

PKG_READ_ACCESS = Iri(PKG + "readAccessRights")
PKG_WRITE_ACCESS = Iri(PKG + "writeAccessRights")
PKG_PREFERENCE = Iri(PKG + "preference")
PKG_PREFERENCE_CLASS = Iri(PKG + "Preference")
PKG_TOPIC = Iri(PKG + "topic")
PKG_WEIGHT = Iri(PKG + "weight")
PKG_ALIAS = Iri(PKG + "alias")

XSD_STRING = Iri(XSD + "string")
XSD_DATETIME = Iri(XSD + "dateTime")
XSD_DECIMAL = Iri(XSD + "decimal")


@dataclass(frozen=True)
class Literal:
    lexical: str
    datatype: Iri = XSD_STRING
    language: str | None = None

    def __str__(self) -> str:
        return self.lexical


Term = Union[Iri, Literal]


def literal_is_well_formed(lit: Literal) -> bool:
    """A language tag is only permitted with the language-string datatype."""
    if lit.language is not None:
        return lit.datatype == RDF_LANG_STRING
    return lit.datatype != RDF_LANG_STRING


@dataclass(frozen=True)
class Quad:
    """Storage atom. The graph is the owner partition; subject is never a
    literal and the predicate is always an IRI, both enforced by the types."""

    graph: Iri
    subject: Iri
    predicate: Iri
    object: Term


_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}


def escape_literal(text: str) -> str:
    out = []
    for ch in text:
        if ch in _ESCAPES:
            out.append(_ESCAPES[ch])
        elif ord(ch) < 0x20:
            out.append("\\u%04X" % ord(ch))
        else:
            out.append(ch)
    return "".join(out)


def term_key(term: Term) -> str:
    """N-Triples-style serialization; the total order used everywhere
    determinism is promised (result rows, Turtle output, bindings)."""
    if isinstance(term, Iri):
        return f"<{term.value}>"
    if term.language is not None:
        return f'"{escape_literal(term.lexical)}"@{term.language}'
    return f'"{escape_literal(term.lexical)}"^^<{term.datatype.value}>'


def quad_key(quad: Quad) -> tuple[str, str, str, str]:
    return (
        term_key(quad.graph),
        term_key(quad.subject),
        term_key(quad.predicate),
        term_key(quad.object),
    )
