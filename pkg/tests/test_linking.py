import logging
import random

import httpx
import pytest

from pkgraph import (
    Concept,
    HttpEntityLinker,
    Iri,
    LinkCandidate,
    PersonalAliasTable,
    RelationIriTable,
    RuleAnnotator,
    link_local,
    resolve,
)
from pkgraph.linking import normalize_linker_payload, resolve_pattern_element
from pkgraph.minting import IdMinter
from pkgraph.vocabulary import element_node
from fixtures import OWNER, fixed_clock

MOM = Iri("https://pkg.example/users/alice/circle/mom")
TOM_CRUISE = Iri("http://dbpedia.org/resource/Tom_Cruise")


@pytest.fixture
def table():
    return PersonalAliasTable.from_pairs(OWNER, {"My Mom": MOM, "bob": Iri("https://pkg.example/users/alice/circle/bob")})


class StubLinker:
    def __init__(self, answers=None):
        self.answers = answers or {}
        self.calls = []

    def link(self, surface):
        self.calls.append(surface)
        return [
            LinkCandidate(surface=surface, iri=iri, confidence=conf, source="external")
            for iri, conf in self.answers.get(surface, [])
        ]


def test_first_person_aliases_map_to_owner(table):
    for alias in ("I", "me", "MY", "myself"):
        candidate = link_local(alias, table)
        assert candidate is not None
        assert candidate.iri == OWNER
        assert candidate.confidence == 1.0
        assert candidate.source == "local"


def test_private_circle_lookup_is_case_and_whitespace_insensitive(table):
    candidate = link_local("  my   mom ", table)
    assert candidate is not None and candidate.iri == MOM


def test_missing_alias_yields_no_candidate(table):
    assert link_local("Zanzibar", table) is None


def test_http_linker_native_shape():
    def handler(request):
        return httpx.Response(
            200,
            json={
                "annotations": [
                    {"surface": "Tom Cruise", "iri": TOM_CRUISE.value, "confidence": 0.93}
                ]
            },
        )

    linker = HttpEntityLinker("http://linker.test/", client=httpx.Client(transport=httpx.MockTransport(handler)))
    candidates = linker.link("Tom Cruise")
    assert candidates == [
        LinkCandidate(surface="Tom Cruise", iri=TOM_CRUISE, confidence=0.93, source="external")
    ]


def test_spotlight_and_rel_shapes_normalize():
    spotlight = {
        "Resources": [
            {"@URI": TOM_CRUISE.value, "@surfaceForm": "Tom Cruise", "@similarityScore": "0.87"}
        ]
    }
    assert normalize_linker_payload("Tom Cruise", spotlight)[0].iri == TOM_CRUISE

    rel = [[0, 10, "Tom Cruise", "Tom Cruise", 0.81]]
    candidates = normalize_linker_payload("Tom Cruise", rel)
    assert candidates[0].iri == TOM_CRUISE
    assert candidates[0].confidence == 0.81


def test_candidates_sort_by_descending_confidence():
    payload = {
        "annotations": [
            {"surface": "x", "iri": "http://a.example/1", "confidence": 0.2},
            {"surface": "x", "iri": "http://a.example/2", "confidence": 0.9},
        ]
    }
    candidates = normalize_linker_payload("x", payload)
    assert [c.confidence for c in candidates] == [0.9, 0.2]


def test_linker_failure_degrades_to_empty_with_warning(caplog):
    def handler(request):
        raise httpx.ConnectTimeout("boom", request=request)

    linker = HttpEntityLinker("http://linker.test/", client=httpx.Client(transport=httpx.MockTransport(handler)))
    with caplog.at_level(logging.WARNING, logger="pkgraph.linking"):
        assert linker.link("Tom Cruise") == []
    assert any("unavailable" in r.message for r in caplog.records)


def test_empty_annotations_stay_empty():
    def handler(request):
        return httpx.Response(200, json={"annotations": []})

    linker = HttpEntityLinker("http://linker.test/", client=httpx.Client(transport=httpx.MockTransport(handler)))
    assert linker.link("whatever") == []


def resolve_tom_cruise(table, linker, threshold=0.5, relations=RelationIriTable()):
    annotation = RuleAnnotator().annotate("I dislike all movies with the actor Tom Cruise")
    return resolve(
        annotation,
        table,
        minter=IdMinter(OWNER, seed=5),
        agent=OWNER,
        clock=fixed_clock,
        linker=linker,
        threshold=threshold,
        relations=relations,
    )


def test_resolve_with_empty_linker_falls_back_to_concepts(table):
    stmt = resolve_tom_cruise(table, StubLinker())
    assert stmt.subject == OWNER
    assert isinstance(stmt.predicate, Concept) and stmt.predicate.text == "dislike"
    assert isinstance(stmt.object, Concept)
    assert stmt.object.text == "all movies with the actor Tom Cruise"
    assert stmt.preference is not None
    assert stmt.preference.weight == -1.0
    assert stmt.preference.holder == OWNER
    assert stmt.preference.topic == stmt.object
    assert stmt.annotation == "I dislike all movies with the actor Tom Cruise"


def test_resolve_threshold_accepts_and_rejects(table):
    oppenheimer = Iri("http://dbpedia.org/resource/Oppenheimer_(film)")
    linker = StubLinker({"Oppenheimer": [(oppenheimer, 0.9)]})
    annotation = RuleAnnotator().annotate("Bob likes Oppenheimer")

    accepted = resolve(
        annotation, PersonalAliasTable(OWNER), minter=IdMinter(OWNER, seed=1),
        agent=OWNER, clock=fixed_clock, linker=linker, threshold=0.5,
    )
    assert accepted.object == oppenheimer

    rejected = resolve(
        annotation, PersonalAliasTable(OWNER), minter=IdMinter(OWNER, seed=2),
        agent=OWNER, clock=fixed_clock, linker=linker, threshold=0.95,
    )
    assert isinstance(rejected.object, Concept)
    assert rejected.object.text == "Oppenheimer"


def test_local_wins_over_external(table):
    linker = StubLinker({"my mom": [(Iri("http://dbpedia.org/resource/Mother"), 0.99)]})
    annotation = RuleAnnotator().annotate("my mom likes tea")
    stmt = resolve(
        annotation, table, minter=IdMinter(OWNER, seed=3), agent=OWNER,
        clock=fixed_clock, linker=linker, threshold=0.5,
    )
    assert stmt.subject == MOM
    assert linker.calls.count("my mom") == 0  # local hit short-circuits


def test_first_person_subject_resolves_to_owner_despite_linker(table):
    linker = StubLinker({"I": [(Iri("http://dbpedia.org/resource/Iodine"), 1.0)]})
    stmt = resolve_tom_cruise(table, linker)
    assert stmt.subject == OWNER


def test_relation_table_resolves_predicates_when_configured(table):
    relations = RelationIriTable({"like": Iri("http://w3id.org/pkg/like")})
    annotation = RuleAnnotator().annotate("Bob likes Oppenheimer")
    stmt = resolve(
        annotation, table, minter=IdMinter(OWNER, seed=4), agent=OWNER,
        clock=fixed_clock, relations=relations,
    )
    assert stmt.predicate == Iri("http://w3id.org/pkg/like")


def test_resolution_is_total_for_add_annotations(table):
    rng = random.Random(11)
    annotator = RuleAnnotator()
    utterances = [
        "I like jazz", "Bob hates rain", "my mom enjoys knitting",
        "Carol owns a kayak", "I don't like waiting",
    ]
    for text in utterances:
        linker = StubLinker(
            {"jazz": [(Iri("http://dbpedia.org/resource/Jazz"), rng.random())]}
        )
        stmt = resolve(
            annotator.annotate(text), table, minter=IdMinter(OWNER, seed=rng.randrange(999)),
            agent=OWNER, clock=fixed_clock, linker=linker, threshold=rng.random(),
        )
        for element in (stmt.subject, stmt.predicate, stmt.object):
            assert isinstance(element, (Iri, Concept))


def test_threshold_monotonicity(table):
    """Raising the threshold never turns a concept fallback into a resolved
    IRI."""
    rng = random.Random(12)
    annotation = RuleAnnotator().annotate("Bob likes Oppenheimer")
    for _ in range(50):
        confidence = rng.random()
        linker = StubLinker(
            {"Oppenheimer": [(Iri("http://dbpedia.org/resource/O"), confidence)]}
        )
        thresholds = sorted(rng.random() for _ in range(4))
        resolved_flags = []
        for threshold in thresholds:
            stmt = resolve(
                annotation, PersonalAliasTable(OWNER), minter=IdMinter(OWNER, seed=1),
                agent=OWNER, clock=fixed_clock, linker=linker, threshold=threshold,
            )
            resolved_flags.append(isinstance(stmt.object, Iri))
        # once it falls back to a concept, higher thresholds keep it a concept
        for earlier, later in zip(resolved_flags, resolved_flags[1:]):
            assert earlier or not later


def test_pattern_elements_resolve_or_stay_text(table):
    assert resolve_pattern_element(None, table) is None
    assert resolve_pattern_element("I", table) == OWNER
    assert resolve_pattern_element("Zanzibar", table) == "Zanzibar"
    linker = StubLinker({"Oppenheimer": [(Iri("http://dbpedia.org/resource/O"), 0.8)]})
    assert resolve_pattern_element("Oppenheimer", table, linker=linker, threshold=0.5) == Iri(
        "http://dbpedia.org/resource/O"
    )


def test_alias_table_round_trips_through_graph_quads(table):
    from pkgraph import QuadStore

    store = QuadStore()
    store.register_owner(OWNER)
    store.insert(table.quads(OWNER))

    from pkgraph.engine import PkgEngine

    engine = PkgEngine()
    engine.register_owner(OWNER, {"My Mom": MOM, "bob": Iri("https://pkg.example/users/alice/circle/bob")})
    restored = engine.alias_table(OWNER)
    assert restored.lookup("my mom") == MOM
    assert restored.lookup("BOB") == Iri("https://pkg.example/users/alice/circle/bob")
    assert restored.lookup("me") == OWNER
