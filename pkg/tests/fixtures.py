"""Hand-built statements used across test modules."""

from __future__ import annotations

from datetime import datetime, timezone

from pkgraph import (
    AccessPolicy,
    Concept,
    Iri,
    PkgStatement,
    Preference,
    Provenance,
)

OWNER = Iri("https://pkg.example/users/alice")
WHEN = datetime(2024, 3, 1, 12, 0, 0, tzinfo=timezone.utc)


def fixed_clock():
    return WHEN


def tom_cruise_statement(owner: Iri = OWNER, suffix: str = "tc") -> PkgStatement:
    base = owner.value.rstrip("/")
    statement_id = Iri(f"{base}/stmt/{suffix}")
    predicate = Concept(Iri(f"{base}/concept/{suffix}-p"), "dislike")
    object_ = Concept(
        Iri(f"{base}/concept/{suffix}-o"), "all movies with the actor Tom Cruise"
    )
    return PkgStatement(
        id=statement_id,
        annotation="I dislike all movies with the actor Tom Cruise",
        subject=owner,
        predicate=predicate,
        object=object_,
        provenance=Provenance(created_by=owner, created_on=WHEN),
        access=AccessPolicy(),
        preference=Preference(
            id=Iri(f"{base}/pref/{suffix}"),
            holder=owner,
            topic=object_,
            weight=-1.0,
            derived_from=statement_id,
        ),
    )


def bob_statement(owner: Iri = OWNER, suffix: str = "bob") -> PkgStatement:
    base = owner.value.rstrip("/")
    statement_id = Iri(f"{base}/stmt/{suffix}")
    subject = Concept(Iri(f"{base}/concept/{suffix}-s"), "Bob")
    predicate = Concept(Iri(f"{base}/concept/{suffix}-p"), "like")
    object_ = Concept(Iri(f"{base}/concept/{suffix}-o"), "Oppenheimer")
    return PkgStatement(
        id=statement_id,
        annotation="Bob likes Oppenheimer",
        subject=subject,
        predicate=predicate,
        object=object_,
        provenance=Provenance(created_by=owner, created_on=WHEN),
        access=AccessPolicy(),
        preference=Preference(
            id=Iri(f"{base}/pref/{suffix}"),
            holder=subject.id,
            topic=object_,
            weight=1.0,
            derived_from=statement_id,
        ),
    )


def minimal_statement(owner: Iri = OWNER, suffix: str = "min") -> PkgStatement:
    base = owner.value.rstrip("/")
    return PkgStatement(
        id=Iri(f"{base}/stmt/{suffix}"),
        annotation="plain resolved statement",
        subject=Iri("http://example.org/people/bob"),
        predicate=Iri("http://example.org/rel/knows"),
        object=Iri("http://example.org/people/carol"),
        provenance=Provenance(created_by=owner, created_on=WHEN),
    )
