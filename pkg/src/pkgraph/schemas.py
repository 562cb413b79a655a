"""JSON wire schemas. Field names are part of the external contract:

Statement  {id, annotation, subject, predicate, object, preference?,
            provenance{createdBy, createdOn, derivedFrom?},
            access{read[], write[]}}
Element    {"iri": u} | {"concept": {"id": u, "text": s}}
Preference {id, holder, topic, weight, derivedFrom}
ActionResult {intent, query, result}
"""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field

from .connector import ActionResult
from .nl2pkg import AnnotatedUtterance
from .terms import Iri
from .vocabulary import (
    Concept,
    PkgStatement,
    Preference,
    SpoElement,
    format_datetime,
)


def element_to_json(element: SpoElement) -> dict:
    if isinstance(element, Concept):
        return {"concept": {"id": element.id.value, "text": element.text}}
    return {"iri": element.value}


def preference_to_json(pref: Preference) -> dict:
    return {
        "id": pref.id.value,
        "holder": pref.holder.value,
        "topic": element_to_json(pref.topic),
        "weight": pref.weight,
        "derivedFrom": pref.derived_from.value,
    }


def statement_to_json(stmt: PkgStatement) -> dict:
    provenance = {
        "createdBy": stmt.provenance.created_by.value,
        "createdOn": format_datetime(stmt.provenance.created_on),
    }
    if stmt.provenance.derived_from is not None:
        provenance["derivedFrom"] = stmt.provenance.derived_from.value
    out = {
        "id": stmt.id.value,
        "annotation": stmt.annotation,
        "subject": element_to_json(stmt.subject),
        "predicate": element_to_json(stmt.predicate),
        "object": element_to_json(stmt.object),
        "provenance": provenance,
        "access": {
            "read": sorted(iri.value for iri in stmt.access.read),
            "write": sorted(iri.value for iri in stmt.access.write),
        },
    }
    if stmt.preference is not None:
        out["preference"] = preference_to_json(stmt.preference)
    return out


def annotation_to_json(a: AnnotatedUtterance) -> dict:
    return {
        "raw": a.raw,
        "intent": a.intent.value,
        "subject": a.subject_text,
        "predicate": a.predicate_text,
        "object": a.object_text,
        "polarity": a.preference_polarity,
        "annotator": a.annotator_id,
        "failureReason": a.failure_reason,
    }


def action_result_to_json(result: ActionResult) -> dict:
    if isinstance(result.result, Iri):
        payload: object = result.result.value
    elif isinstance(result.result, list):
        payload = [statement_to_json(s) for s in result.result]
    else:
        payload = result.result
    return {"intent": result.intent.value, "query": result.query, "result": payload}


# ---- request bodies ----


class ConceptIn(BaseModel):
    text: str


class ElementIn(BaseModel):
    """An element is given either as an IRI or as text (the text becomes a
    concept node)."""

    iri: Optional[str] = None
    text: Optional[str] = None
    concept: Optional[ConceptIn] = None

    def value(self) -> "Iri | str":
        if self.iri is not None:
            return Iri(self.iri)
        if self.text is not None:
            return self.text
        if self.concept is not None:
            return self.concept.text
        raise ValueError("element needs 'iri', 'text', or 'concept'")


class PreferenceIn(BaseModel):
    weight: float


class StatementIn(BaseModel):
    annotation: str
    subject: ElementIn
    predicate: ElementIn
    object: ElementIn
    preference: Optional[PreferenceIn] = None
    access: Optional["AccessIn"] = None


class AccessIn(BaseModel):
    read: list[str] = Field(default_factory=list)
    write: list[str] = Field(default_factory=list)


class NlIn(BaseModel):
    statement: str


class OwnerIn(BaseModel):
    name: str
    iri: Optional[str] = None
    aliases: dict[str, str] = Field(default_factory=dict)


class ServiceIn(BaseModel):
    id: str
