import random
from dataclasses import replace
from datetime import datetime, timezone

import pytest

from pkgraph import (
    Concept,
    Iri,
    Literal,
    PkgStatement,
    Preference,
    StatementStructureError,
    ValidationFailed,
    quads_to_statement,
    statement_to_quads,
    validate_statement,
)
from pkgraph.terms import (
    PKG,
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
    XSD_DECIMAL,
)
from generators import OWNER, expected_quad_count, random_statement
from fixtures import minimal_statement, tom_cruise_statement

EMITTED_PROPERTIES = {
    RDF_TYPE,
    DCTERMS_DESCRIPTION,
    RDF_SUBJECT,
    RDF_PREDICATE,
    RDF_OBJECT,
    SKOS_PREF_LABEL,
    SKOS_RELATED,
    SKOS_BROADER,
    SKOS_NARROWER,
    PAV_CREATED_BY,
    PAV_CREATED_ON,
    PAV_DERIVED_FROM,
    PKG_READ_ACCESS,
    PKG_WRITE_ACCESS,
    PKG_PREFERENCE,
    PKG_TOPIC,
    PKG_WEIGHT,
}


def test_minimal_statement_emits_exactly_the_mandatory_quads():
    stmt = minimal_statement()
    quads = statement_to_quads(stmt, OWNER)
    assert len(quads) == 7
    predicates = {q.predicate for q in quads}
    assert predicates == {
        RDF_TYPE,
        DCTERMS_DESCRIPTION,
        RDF_SUBJECT,
        RDF_PREDICATE,
        RDF_OBJECT,
        PAV_CREATED_BY,
        PAV_CREATED_ON,
    }


def test_tom_cruise_statement_shape():
    stmt = tom_cruise_statement()
    quads = statement_to_quads(stmt, OWNER)
    quadset = {(q.subject, q.predicate, q.object) for q in quads}

    assert (stmt.id, RDF_TYPE, RDF_STATEMENT) in quadset
    assert (stmt.id, RDF_SUBJECT, OWNER) in quadset
    assert (stmt.id, RDF_OBJECT, stmt.object.id) in quadset
    assert (stmt.object.id, RDF_TYPE, SKOS_CONCEPT) in quadset
    assert (stmt.predicate.id, SKOS_PREF_LABEL, Literal("dislike")) in quadset

    weight_quads = [q for q in quads if q.predicate == PKG_WEIGHT]
    assert len(weight_quads) == 1
    assert weight_quads[0].object == Literal("-1.0", XSD_DECIMAL)
    assert (stmt.preference.id, RDF_TYPE, PKG_PREFERENCE_CLASS) in quadset
    assert (OWNER, PKG_PREFERENCE, stmt.preference.id) in quadset


def test_statement_to_quads_is_deterministic():
    stmt = tom_cruise_statement()
    assert statement_to_quads(stmt, OWNER) == statement_to_quads(stmt, OWNER)


def test_quad_count_formula_on_500_random_statements():
    rng = random.Random(101)
    for _ in range(500):
        stmt = random_statement(rng)
        quads = statement_to_quads(stmt, OWNER)
        assert len(quads) == len(set(quads)), "emitter produced duplicates"
        assert len(quads) == expected_quad_count(stmt)


def test_round_trip_identity_on_500_random_statements():
    rng = random.Random(202)
    for _ in range(500):
        stmt = random_statement(rng)
        quads = statement_to_quads(stmt, OWNER)
        rng.shuffle(quads)  # round-trip is order-insensitive
        assert quads_to_statement(quads, stmt.id) == stmt


def test_round_trip_of_tom_cruise_statement_is_field_for_field():
    stmt = tom_cruise_statement()
    assert quads_to_statement(statement_to_quads(stmt, OWNER), stmt.id) == stmt


def test_emitted_properties_come_from_the_namespace_table():
    rng = random.Random(303)
    for _ in range(100):
        stmt = random_statement(rng)
        for quad in statement_to_quads(stmt, OWNER):
            assert quad.predicate in EMITTED_PROPERTIES


def test_missing_subject_quad_reports_the_missing_piece():
    stmt = tom_cruise_statement()
    quads = [q for q in statement_to_quads(stmt, OWNER) if q.predicate != RDF_SUBJECT]
    with pytest.raises(StatementStructureError) as err:
        quads_to_statement(quads, stmt.id)
    assert "rdf:subject" in str(err.value)


def test_invalid_iri_raises_a_validation_error_naming_the_field():
    stmt = replace(minimal_statement(), subject=Iri("not an iri"))
    with pytest.raises(ValidationFailed) as err:
        statement_to_quads(stmt, OWNER)
    assert any(v.path == "subject" for v in err.value.violations)


def test_validate_passes_the_movie_dislike_fixture():
    assert validate_statement(tom_cruise_statement()) == []


def test_validate_rejects_out_of_range_weight():
    stmt = tom_cruise_statement()
    bad = replace(stmt, preference=replace(stmt.preference, weight=2.0))
    violations = validate_statement(bad)
    assert [v.path for v in violations] == ["preference.weight"]


def test_validate_rejects_empty_annotation():
    bad = replace(minimal_statement(), annotation="")
    violations = validate_statement(bad)
    assert [v.path for v in violations] == ["annotation"]


def test_validate_rejects_future_created_on():
    stmt = minimal_statement()
    violations = validate_statement(
        stmt, now=datetime(2020, 1, 1, tzinfo=timezone.utc)
    )
    assert [v.path for v in violations] == ["provenance.createdOn"]


def test_validate_rejects_owner_in_access_sets():
    stmt = minimal_statement()
    bad = replace(stmt, access=replace(stmt.access, read=frozenset({OWNER})))
    violations = validate_statement(bad, owner=OWNER)
    assert any(v.path == "access.read" for v in violations)


def test_validate_is_equivalent_to_per_invariant_brute_force():
    """Soundness and completeness against an independent checker that tests
    each invariant in isolation."""
    rng = random.Random(404)

    def brute_force_ok(stmt: PkgStatement) -> bool:
        import re

        iri_ok = lambda i: bool(re.match(r'^[A-Za-z][A-Za-z0-9+.\-]*:[^\x00-\x20<>"{}|^`\\]*$', i.value))

        def element_ok(el):
            if isinstance(el, Concept):
                return (
                    iri_ok(el.id)
                    and bool(el.text.strip())
                    and all(iri_ok(l) for l in el.related + el.broader + el.narrower)
                )
            return iri_ok(el)

        checks = [
            iri_ok(stmt.id),
            bool(stmt.annotation.strip()),
            element_ok(stmt.subject),
            element_ok(stmt.predicate),
            element_ok(stmt.object),
            iri_ok(stmt.provenance.created_by),
            stmt.provenance.created_on.tzinfo is not None,
            stmt.provenance.created_on.microsecond == 0,
            stmt.provenance.derived_from is None or iri_ok(stmt.provenance.derived_from),
            all(iri_ok(i) for i in stmt.access.read | stmt.access.write),
        ]
        if stmt.preference is not None:
            from pkgraph.vocabulary import element_node

            checks += [
                iri_ok(stmt.preference.id),
                stmt.preference.holder == element_node(stmt.subject),
                element_ok(stmt.preference.topic),
                -1.0 <= stmt.preference.weight <= 1.0,
                stmt.preference.derived_from == stmt.id,
            ]
        return all(checks)

    def mutate(stmt: PkgStatement) -> PkgStatement:
        options = [
            lambda s: replace(s, annotation=" "),
            lambda s: replace(s, id=Iri("no scheme")),
            lambda s: replace(s, subject=Iri("bad iri")),
            lambda s: replace(s, object=Concept(Iri(f"{OWNER.value}/concept/x"), "")),
        ]
        if stmt.preference is not None:
            options += [
                lambda s: replace(s, preference=replace(s.preference, weight=1.5)),
                lambda s: replace(s, preference=replace(s.preference, holder=Iri("http://other.example/h"))),
                lambda s: replace(s, preference=replace(s.preference, derived_from=Iri("http://other.example/d"))),
            ]
        return rng.choice(options)(stmt)

    for i in range(300):
        stmt = random_statement(rng)
        if i % 2 == 0:
            stmt = mutate(stmt)
        assert (validate_statement(stmt) == []) == brute_force_ok(stmt)


def test_preference_namespace_is_the_published_prefix():
    assert PKG == "http://w3id.org/pkg/"
