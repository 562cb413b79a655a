"""In-process quad store: one named graph per owner, three permutation
indexes per graph (SPO, POS, OSP), and execution of the SPARQL subset
used by the connector (basic graph patterns plus equality filters).

Concurrency contract: many readers or one writer per graph; a running
select observes a single revision.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Union

from .terms import Iri, Literal, Quad, Term, term_key
from .turtle import parse_turtle, serialize_turtle


class StoreError(Exception):
    pass


class UnknownGraphError(StoreError):
    def __init__(self, graph: Iri):
        self.graph = graph
        super().__init__(f"graph not registered to any owner: {graph.value}")


class QueryValidationError(StoreError):
    pass


@dataclass(frozen=True)
class Variable:
    name: str

    def __str__(self) -> str:
        return f"?{self.name}"


PatternTerm = Union[Iri, Literal, Variable]


@dataclass(frozen=True)
class TriplePattern:
    subject: PatternTerm
    predicate: PatternTerm
    object: PatternTerm

    def variables(self) -> list[str]:
        return [t.name for t in (self.subject, self.predicate, self.object) if isinstance(t, Variable)]

    def ground_count(self) -> int:
        return sum(1 for t in (self.subject, self.predicate, self.object) if not isinstance(t, Variable))


@dataclass(frozen=True)
class SelectQuery:
    projected: tuple[str, ...]
    graph: Iri
    patterns: tuple[TriplePattern, ...]
    filters: tuple[tuple[str, Term], ...] = ()


@dataclass(frozen=True)
class InsertDataQuery:
    quads: tuple[Quad, ...]


@dataclass(frozen=True)
class DeleteWhereQuery:
    graph: Iri
    patterns: tuple[TriplePattern, ...]


UpdateQuery = Union[InsertDataQuery, DeleteWhereQuery]

Binding = dict[str, Term]


class _RWLock:
    """Reader-writer lock, writer-preferring enough for a desk-scale store."""

    def __init__(self) -> None:
        self._cond = threading.Condition()
        self._readers = 0
        self._writer = False

    def acquire_read(self) -> None:
        with self._cond:
            while self._writer:
                self._cond.wait()
            self._readers += 1

    def release_read(self) -> None:
        with self._cond:
            self._readers -= 1
            if self._readers == 0:
                self._cond.notify_all()

    def acquire_write(self) -> None:
        with self._cond:
            while self._writer or self._readers:
                self._cond.wait()
            self._writer = True

    def release_write(self) -> None:
        with self._cond:
            self._writer = False
            self._cond.notify_all()


class _GraphIndex:
    """Triple set for one graph, indexed by the three permutations that let
    any ground-term combination be looked up without scanning."""

    def __init__(self) -> None:
        self.spo: dict[Iri, dict[Iri, set[Term]]] = {}
        self.pos: dict[Iri, dict[Term, set[Iri]]] = {}
        self.osp: dict[Term, dict[Iri, set[Iri]]] = {}
        self.size = 0
        self.lock = _RWLock()

    def add(self, s: Iri, p: Iri, o: Term) -> bool:
        objects = self.spo.setdefault(s, {}).setdefault(p, set())
        if o in objects:
            return False
        objects.add(o)
        self.pos.setdefault(p, {}).setdefault(o, set()).add(s)
        self.osp.setdefault(o, {}).setdefault(s, set()).add(p)
        self.size += 1
        return True

    def remove(self, s: Iri, p: Iri, o: Term) -> bool:
        objects = self.spo.get(s, {}).get(p)
        if objects is None or o not in objects:
            return False
        objects.discard(o)
        self.pos[p][o].discard(s)
        self.osp[o][s].discard(p)
        self.size -= 1
        return True

    def triples(self) -> Iterator[tuple[Iri, Iri, Term]]:
        for s, by_p in self.spo.items():
            for p, objects in by_p.items():
                for o in objects:
                    yield (s, p, o)

    def match(
        self, s: Optional[Iri], p: Optional[Iri], o: Optional[Term]
    ) -> Iterator[tuple[Iri, Iri, Term]]:
        if s is not None and p is not None:
            objects = self.spo.get(s, {}).get(p, set())
            if o is not None:
                if o in objects:
                    yield (s, p, o)
            else:
                for obj in objects:
                    yield (s, p, obj)
        elif p is not None and o is not None:
            for subj in self.pos.get(p, {}).get(o, set()):
                yield (subj, p, o)
        elif s is not None and o is not None:
            for pred in self.osp.get(o, {}).get(s, set()):
                yield (s, pred, o)
        elif s is not None:
            for p2, objects in self.spo.get(s, {}).items():
                for obj in objects:
                    yield (s, p2, obj)
        elif p is not None:
            for obj, subjects in self.pos.get(p, {}).items():
                for subj in subjects:
                    yield (subj, p, obj)
        elif o is not None:
            for subj, preds in self.osp.get(o, {}).items():
                for pred in preds:
                    yield (subj, pred, o)
        else:
            yield from self.triples()


def _binding_sort_key(variables: list[str]):
    def key(binding: Binding):
        return tuple(term_key(binding[v]) for v in variables)

    return key


class QuadStore:
    def __init__(self) -> None:
        self._graphs: dict[Iri, _GraphIndex] = {}
        self._registry_lock = threading.Lock()
        self._revision = 0

    @property
    def revision(self) -> int:
        return self._revision

    def register_owner(self, graph: Iri) -> None:
        with self._registry_lock:
            self._graphs.setdefault(graph, _GraphIndex())

    def is_registered(self, graph: Iri) -> bool:
        return graph in self._graphs

    def graphs(self) -> list[Iri]:
        return sorted(self._graphs, key=lambda g: g.value)

    def _graph(self, graph: Iri) -> _GraphIndex:
        try:
            return self._graphs[graph]
        except KeyError:
            raise UnknownGraphError(graph) from None

    def size(self, graph: Iri) -> int:
        return self._graph(graph).size

    def graph_quads(self, graph: Iri) -> list[Quad]:
        index = self._graph(graph)
        index.lock.acquire_read()
        try:
            quads = [Quad(graph, s, p, o) for s, p, o in index.triples()]
        finally:
            index.lock.release_read()
        quads.sort(key=lambda q: (term_key(q.subject), term_key(q.predicate), term_key(q.object)))
        return quads

    def insert(self, quads: Iterable[Quad]) -> int:
        """Insert ground quads (set semantics, idempotent). The revision
        increases iff the store changed."""
        quads = list(quads)
        for quad in quads:
            if quad.graph not in self._graphs:
                raise UnknownGraphError(quad.graph)
        changed = False
        for graph in sorted({q.graph for q in quads}, key=lambda g: g.value):
            index = self._graphs[graph]
            index.lock.acquire_write()
            try:
                for quad in quads:
                    if quad.graph == graph and index.add(quad.subject, quad.predicate, quad.object):
                        changed = True
            finally:
                index.lock.release_write()
        if changed:
            with self._registry_lock:
                self._revision += 1
        return self._revision

    def remove(self, quads: Iterable[Quad]) -> int:
        quads = list(quads)
        for quad in quads:
            if quad.graph not in self._graphs:
                raise UnknownGraphError(quad.graph)
        changed = False
        for graph in sorted({q.graph for q in quads}, key=lambda g: g.value):
            index = self._graphs[graph]
            index.lock.acquire_write()
            try:
                for quad in quads:
                    if quad.graph == graph and index.remove(quad.subject, quad.predicate, quad.object):
                        changed = True
            finally:
                index.lock.release_write()
        if changed:
            with self._registry_lock:
                self._revision += 1
        return self._revision

    def match(self, graph: Iri, pattern: TriplePattern) -> list[Binding]:
        """Every binding of the pattern's variables against the graph, in a
        deterministic order. An unregistered graph matches nothing."""
        if graph not in self._graphs:
            return []
        index = self._graphs[graph]
        index.lock.acquire_read()
        try:
            bindings = self._match_locked(index, pattern, {})
        finally:
            index.lock.release_read()
        variables = pattern.variables()
        bindings.sort(key=_binding_sort_key(sorted(set(variables))))
        return bindings

    def _match_locked(
        self, index: _GraphIndex, pattern: TriplePattern, bound: Binding
    ) -> list[Binding]:
        def resolve(t: PatternTerm) -> Optional[Term]:
            if isinstance(t, Variable):
                return bound.get(t.name)
            return t

        s, p, o = resolve(pattern.subject), resolve(pattern.predicate), resolve(pattern.object)
        if isinstance(s, Literal):
            return []  # subjects are never literals
        if p is not None and not isinstance(p, Iri):
            return []
        out: list[Binding] = []
        for ms, mp, mo in index.match(s, p, o):
            binding = dict(bound)
            ok = True
            for pat, val in ((pattern.subject, ms), (pattern.predicate, mp), (pattern.object, mo)):
                if isinstance(pat, Variable):
                    seen = binding.get(pat.name)
                    if seen is None:
                        binding[pat.name] = val
                    elif seen != val:
                        ok = False
                        break
            if ok:
                out.append(binding)
        return out

    def _validate_select(self, q: SelectQuery) -> None:
        if not q.patterns:
            raise QueryValidationError("select query has no graph pattern")
        pattern_vars = {v for p in q.patterns for v in p.variables()}
        for v in q.projected:
            if v not in pattern_vars:
                raise QueryValidationError(f"projected variable ?{v} does not occur in the pattern")
        for v, _term in q.filters:
            if v not in pattern_vars:
                raise QueryValidationError(f"filter variable ?{v} does not occur in the pattern")
        for p in q.patterns:
            if isinstance(p.predicate, Literal):
                raise QueryValidationError("pattern predicate must be an IRI or variable")

    def execute_select(self, q: SelectQuery) -> "ResultTable":
        """Natural join of the basic graph pattern, equality filters, then
        projection; rows are deduplicated and ordered lexicographically by
        term serialization."""
        self._validate_select(q)
        if q.graph not in self._graphs:
            return ResultTable(q.projected, [])
        index = self._graphs[q.graph]

        # Most selective first: more ground positions means fewer matches.
        order = sorted(q.patterns, key=lambda p: -p.ground_count())
        filters = list(q.filters)

        index.lock.acquire_read()
        try:
            bindings: list[Binding] = [{}]
            for pattern in order:
                next_bindings: list[Binding] = []
                for binding in bindings:
                    next_bindings.extend(self._match_locked(index, pattern, binding))
                bindings = next_bindings
                bindings = [
                    b
                    for b in bindings
                    if all(b[v] == t for v, t in filters if v in b)
                ]
                if not bindings:
                    break
        finally:
            index.lock.release_read()

        rows = {tuple(b[v] for v in q.projected) for b in bindings}
        ordered = sorted(rows, key=lambda row: tuple(term_key(t) for t in row))
        return ResultTable(q.projected, ordered)

    def export_turtle(self, graph: Iri) -> str:
        quads = self.graph_quads(graph)
        return serialize_turtle((q.subject, q.predicate, q.object) for q in quads)

    def import_turtle(self, graph: Iri, text: str) -> int:
        """Parse a Turtle document and add its triples to the graph; the
        round-trip import(export(g)) reproduces g exactly as a quad set."""
        self._graph(graph)
        triples = parse_turtle(text)
        return self.insert(Quad(graph, s, p, o) for s, p, o in triples)

    def execute_update(self, q: UpdateQuery) -> int:
        if isinstance(q, InsertDataQuery):
            for quad in q.quads:
                for t in (quad.subject, quad.predicate, quad.object):
                    if isinstance(t, Variable):
                        raise QueryValidationError("insert data quads must be ground")
            return self.insert(q.quads)
        if isinstance(q, DeleteWhereQuery):
            self._graph(q.graph)
            select = SelectQuery(
                projected=tuple(sorted({v for p in q.patterns for v in p.variables()})),
                graph=q.graph,
                patterns=q.patterns,
            )
            # A fully ground pattern list yields a single empty row iff every
            # listed triple is present; nothing is removed on a partial match.
            table = self.execute_select(select)
            to_delete: set[Quad] = set()
            for row in table.rows:
                env = dict(zip(select.projected, row))
                for pattern in q.patterns:
                    quad = _instantiate(q.graph, pattern, env)
                    if quad is not None:
                        to_delete.add(quad)
            if not to_delete:
                return self._revision
            return self.remove(sorted(to_delete, key=lambda quad: term_key(quad.object)))
        raise QueryValidationError(f"unsupported update query: {q!r}")


def _instantiate(graph: Iri, pattern: TriplePattern, env: Binding) -> Optional[Quad]:
    def value(t: PatternTerm) -> Optional[Term]:
        if isinstance(t, Variable):
            return env.get(t.name)
        return t

    s, p, o = value(pattern.subject), value(pattern.predicate), value(pattern.object)
    if s is None or p is None or o is None:
        return None
    if not isinstance(s, Iri) or not isinstance(p, Iri):
        return None
    return Quad(graph, s, p, o)


@dataclass(frozen=True)
class ResultTable:
    variables: tuple[str, ...]
    rows: list[tuple[Term, ...]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rows)

    def column(self, variable: str) -> list[Term]:
        i = self.variables.index(variable)
        return [row[i] for row in self.rows]
