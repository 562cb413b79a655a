"""pkgraph: a self-contained personal knowledge graph engine.

Natural-language statements are annotated (intent, SPO, preference),
entity-linked, reified into an RDF quad store, and served over a REST API
with per-statement access control.
"""

from .connector import ActionResult, PkgAction, PkgConnector, StatementPattern
from .engine import PkgEngine, UtteranceNotUnderstood
from .linking import (
    HttpEntityLinker,
    LinkCandidate,
    PersonalAliasTable,
    RelationIriTable,
    link_local,
    resolve,
)
from .minting import IdMinter
from .nl2pkg import (
    AnnotatedUtterance,
    Intent,
    ModelAnnotator,
    ModelEndpointConfig,
    RuleAnnotator,
    validate_annotation,
)
from .sparql import QueryParseError, parse_query, query_to_text
from .store import (
    DeleteWhereQuery,
    InsertDataQuery,
    QuadStore,
    ResultTable,
    SelectQuery,
    TriplePattern,
    UnknownGraphError,
    Variable,
)
from .terms import Iri, Literal, Quad, Term
from .turtle import TurtleParseError, parse_turtle, serialize_turtle
from .vocabulary import (
    AccessPolicy,
    Concept,
    PkgStatement,
    Preference,
    Provenance,
    StatementStructureError,
    ValidationFailed,
    Violation,
    quads_to_statement,
    statement_to_quads,
    utc_now,
    validate_statement,
)

__version__ = "0.1.0"

__all__ = [
    "ActionResult",
    "AccessPolicy",
    "AnnotatedUtterance",
    "Concept",
    "DeleteWhereQuery",
    "HttpEntityLinker",
    "IdMinter",
    "InsertDataQuery",
    "Intent",
    "Iri",
    "LinkCandidate",
    "Literal",
    "ModelAnnotator",
    "ModelEndpointConfig",
    "PersonalAliasTable",
    "PkgAction",
    "PkgConnector",
    "PkgEngine",
    "PkgStatement",
    "Preference",
    "Provenance",
    "Quad",
    "QuadStore",
    "QueryParseError",
    "RelationIriTable",
    "ResultTable",
    "RuleAnnotator",
    "SelectQuery",
    "StatementPattern",
    "StatementStructureError",
    "Term",
    "TriplePattern",
    "TurtleParseError",
    "UnknownGraphError",
    "UtteranceNotUnderstood",
    "ValidationFailed",
    "Variable",
    "Violation",
    "link_local",
    "parse_query",
    "parse_turtle",
    "quads_to_statement",
    "query_to_text",
    "resolve",
    "serialize_turtle",
    "statement_to_quads",
    "utc_now",
    "validate_annotation",
    "validate_statement",
]
