"""Stage-1 understanding of an utterance: intent, surface-form SPO triple,
and preference polarity.

Two interchangeable annotators implement the same contract. The rule-based
one is deterministic and fully offline; the model-backed one talks to an
external chat-completion endpoint and degrades to UNKNOWN instead of ever
raising.
"""

from __future__ import annotations

import json
import logging
import re
import threading
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from typing import Optional, Protocol

import httpx

from .terms import Iri
from .vocabulary import Violation

log = logging.getLogger(__name__)


class Intent(str, Enum):
    ADD = "ADD"
    GET = "GET"
    DELETE = "DELETE"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class AnnotatedUtterance:
    raw: str
    intent: Intent
    subject_text: Optional[str] = None
    predicate_text: Optional[str] = None
    object_text: Optional[str] = None
    preference_polarity: Optional[int] = None
    annotator_id: str = ""
    failure_reason: Optional[str] = None


class Annotator(Protocol):
    def annotate(self, raw: str, owner: Optional[Iri] = None) -> AnnotatedUtterance: ...


def validate_annotation(a: AnnotatedUtterance) -> list[Violation]:
    """Gate between stage 1 and stage 2: enforce the annotation invariants."""
    out: list[Violation] = []
    if a.intent == Intent.UNKNOWN:
        for name in ("subject_text", "predicate_text", "object_text"):
            if getattr(a, name) is not None:
                out.append(Violation(name, "UNKNOWN intent carries no SPO"))
        if a.preference_polarity is not None:
            out.append(Violation("preference_polarity", "UNKNOWN intent carries no polarity"))
    elif a.preference_polarity is not None:
        if a.intent != Intent.ADD:
            out.append(
                Violation("preference_polarity", "polarity is only meaningful for ADD intents")
            )
        if a.preference_polarity not in (1, -1):
            out.append(Violation("preference_polarity", "polarity must be +1 or -1"))
    return out


def load_relation_lexicon(path: Optional[str] = None) -> dict[str, int]:
    """Relation verbs with sentiment polarity (-1, 0, +1), one
    ``lemma<TAB>polarity`` entry per line; '#' starts a comment."""
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = resources.files("pkgraph").joinpath("data/relations.tsv").read_text("utf-8")
    lexicon: dict[str, int] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        lemma, _, polarity = line.partition("\t")
        lexicon[lemma.strip().lower()] = int(polarity.strip() or "0")
    return lexicon


_GET_LEADERS = frozenset({"show", "list", "what", "who", "which"})
_DELETE_LEADERS = frozenset({"delete", "remove", "forget"})
_NEGATIONS = frozenset({"not", "don't", "dont", "doesn't", "doesnt", "didn't", "didnt", "never"})
_ARTICLES = frozenset({"the", "a", "an"})
_FILLERS = frozenset({"do", "does", "did", "statement", "statements", "fact", "facts", "that", "me"})

_EDGE_PUNCT = ".,!?;:\"'()[]"


def _clean(token: str) -> str:
    return token.strip(_EDGE_PUNCT)


class RuleAnnotator:
    """Deterministic offline annotator: keyword intents, relation-lexicon
    SPO split, single pre-verb negation handling."""

    annotator_id = "rule"

    def __init__(self, lexicon: Optional[dict[str, int]] = None):
        self.lexicon = dict(lexicon) if lexicon is not None else load_relation_lexicon()

    def annotate(self, raw: str, owner: Optional[Iri] = None) -> AnnotatedUtterance:
        text = raw.strip()
        if not text:
            return AnnotatedUtterance(raw, Intent.UNKNOWN, annotator_id=self.annotator_id)
        asks_question = text.endswith("?")
        tokens = [t for t in text.split() if _clean(t)]
        if not tokens:
            return AnnotatedUtterance(raw, Intent.UNKNOWN, annotator_id=self.annotator_id)

        first = _clean(tokens[0]).lower()
        if first in _GET_LEADERS:
            intent, body = Intent.GET, self._strip_fillers(tokens[1:])
        elif first in _DELETE_LEADERS:
            intent, body = Intent.DELETE, self._strip_fillers(tokens[1:])
        elif asks_question:
            intent, body = Intent.GET, self._strip_fillers(tokens)
        else:
            intent, body = None, tokens  # declarative: decided by verb presence

        spo = self._split_spo(body)
        if intent is None:
            if spo is None:
                return AnnotatedUtterance(raw, Intent.UNKNOWN, annotator_id=self.annotator_id)
            intent = Intent.ADD
        if spo is None:
            return AnnotatedUtterance(raw, intent, annotator_id=self.annotator_id)

        subject, lemma, object_, negated = spo
        polarity: Optional[int] = None
        if intent == Intent.ADD:
            verb_polarity = self.lexicon.get(lemma, 0)
            if verb_polarity > 0:
                polarity = -1 if negated else 1
            elif verb_polarity < 0:
                polarity = -1
        return AnnotatedUtterance(
            raw,
            intent,
            subject_text=subject,
            predicate_text=lemma,
            object_text=object_,
            preference_polarity=polarity,
            annotator_id=self.annotator_id,
        )

    def _strip_fillers(self, tokens: list[str]) -> list[str]:
        i = 0
        while i < len(tokens) and _clean(tokens[i]).lower() in (_ARTICLES | _FILLERS):
            i += 1
        return tokens[i:]

    def _lemma(self, token: str) -> Optional[str]:
        t = _clean(token).lower()
        if t in self.lexicon:
            return t
        candidates = []
        if t.endswith("ies"):
            candidates.append(t[:-3] + "y")
        if t.endswith("es"):
            candidates.append(t[:-2])
        if t.endswith("s"):
            candidates.append(t[:-1])
        if t.endswith("ed"):
            candidates.extend((t[:-2], t[:-1]))
        if t.endswith("ing"):
            candidates.extend((t[:-3], t[:-3] + "e"))
        for candidate in candidates:
            if candidate in self.lexicon:
                return candidate
        return None

    def _split_spo(
        self, body: list[str]
    ) -> Optional[tuple[Optional[str], str, Optional[str], bool]]:
        """Split on the first relation-lexicon verb: text before is the
        subject, the verb lemma the predicate, the trimmed remainder the
        object. Returns None when no relation verb occurs."""
        for i, token in enumerate(body):
            lemma = self._lemma(token)
            if lemma is None:
                continue
            negated = i > 0 and _clean(body[i - 1]).lower() in _NEGATIONS
            subject_tokens = body[: i - 1] if negated else body[:i]
            object_tokens = body[i + 1 :]
            while object_tokens and _clean(object_tokens[0]).lower() in _ARTICLES:
                object_tokens = object_tokens[1:]
            subject = " ".join(_clean(t) for t in subject_tokens).strip() or None
            object_ = " ".join(_clean(t) for t in object_tokens).strip() or None
            return subject, lemma, object_, negated
        return None


# Final-line answer grammar for model responses.
_INTENT_LINE = re.compile(r"^INTENT:\s*([A-Za-z]+)\s*$", re.IGNORECASE)
_SPO_LINE = re.compile(r"^SPO:\s*(.+)$", re.IGNORECASE)
_PREF_LINE = re.compile(r"^PREF:\s*(\+1|-1|none)\s*$", re.IGNORECASE)

_PROMPT_TASKS = ("intent", "spo", "preference")


@dataclass(frozen=True)
class ModelEndpointConfig:
    url: str
    model: str
    timeout: float = 30.0
    max_inflight: int = 4


def load_prompt_templates(directory: Optional[str] = None) -> dict[str, str]:
    templates = {}
    for task in _PROMPT_TASKS:
        if directory is not None:
            with open(f"{directory}/{task}.txt", encoding="utf-8") as fh:
                templates[task] = fh.read()
        else:
            templates[task] = (
                resources.files("pkgraph").joinpath(f"data/prompts/{task}.txt").read_text("utf-8")
            )
    return templates


class _TransportError(Exception):
    pass


class ModelAnnotator:
    """Annotator backed by a chat-completion endpoint speaking
    ``{model, prompt} -> {response}``. Three exchanges per utterance
    (intent, SPO, preference); any transport or answer-grammar failure
    degrades the whole annotation to UNKNOWN with a recorded reason."""

    def __init__(
        self,
        config: ModelEndpointConfig,
        client: Optional[httpx.Client] = None,
        prompts: Optional[dict[str, str]] = None,
    ):
        self.config = config
        self.annotator_id = f"model:{config.model}"
        self._client = client if client is not None else httpx.Client(timeout=config.timeout)
        self._prompts = prompts if prompts is not None else load_prompt_templates()
        self._inflight = threading.BoundedSemaphore(config.max_inflight)

    def _exchange(self, task: str, utterance: str) -> str:
        """Final non-empty response line for one prompt task; raises
        _TransportError on any HTTP or payload-shape problem."""
        prompt = self._prompts[task].replace("{{utterance}}", utterance)
        try:
            with self._inflight:
                response = self._client.post(
                    self.config.url,
                    json={"model": self.config.model, "prompt": prompt},
                    timeout=self.config.timeout,
                )
            response.raise_for_status()
            text = str(response.json()["response"])
        except (httpx.HTTPError, json.JSONDecodeError, KeyError) as exc:
            raise _TransportError(str(exc)) from exc
        lines = [line.strip() for line in text.splitlines() if line.strip()]
        return lines[-1] if lines else ""

    def _degraded(self, raw: str, reason: str) -> AnnotatedUtterance:
        log.warning("model annotation degraded to UNKNOWN (%s): %r", reason, raw)
        return AnnotatedUtterance(
            raw, Intent.UNKNOWN, annotator_id=self.annotator_id, failure_reason=reason
        )

    def annotate(self, raw: str, owner: Optional[Iri] = None) -> AnnotatedUtterance:
        try:
            line = self._exchange("intent", raw)
        except _TransportError:
            return self._degraded(raw, "transport")
        m = _INTENT_LINE.match(line)
        if m is None or m.group(1).upper() not in Intent.__members__:
            return self._degraded(raw, "intent-parse")
        intent = Intent[m.group(1).upper()]
        if intent == Intent.UNKNOWN:
            return AnnotatedUtterance(raw, intent, annotator_id=self.annotator_id)

        try:
            line = self._exchange("spo", raw)
        except _TransportError:
            return self._degraded(raw, "transport")
        m = _SPO_LINE.match(line)
        parts = [p.strip() for p in m.group(1).split("|")] if m else []
        if len(parts) != 3:
            return self._degraded(raw, "spo-parse")
        subject, predicate, object_ = (
            None if p.lower() in ("", "-", "none") else p for p in parts
        )

        try:
            line = self._exchange("preference", raw)
        except _TransportError:
            return self._degraded(raw, "transport")
        m = _PREF_LINE.match(line)
        if m is None:
            return self._degraded(raw, "pref-parse")
        token = m.group(1).lower()
        polarity = None if token == "none" else int(token)
        if intent != Intent.ADD and polarity is not None:
            log.warning("dropping polarity %+d on %s intent: %r", polarity, intent.value, raw)
            polarity = None

        return AnnotatedUtterance(
            raw,
            intent,
            subject_text=subject,
            predicate_text=predicate,
            object_text=object_,
            preference_polarity=polarity,
            annotator_id=self.annotator_id,
        )
