"""Dictionary-encoded triple store with SPO/POS/OSP indexes.

Terms are interned to dense integer ids; the triple set is kept as three
sorted permutation lists so every match() shape becomes a binary-searched
range scan. Results stream in index order, which makes them deterministic for
a given insertion sequence.

Concurrency: many readers or one writer. Readers take snapshots under a
shared lock, so a match stream never observes a partially applied write.
The lock prefers writers (new readers queue behind a waiting writer) but
reads stay reentrant per thread, so query evaluation can hold the read side
across several probes without deadlocking.
"""

from __future__ import annotations

import re
import threading
from bisect import bisect_left, insort
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterable, Iterator, Union

from .rdf import BlankNode, Graph, Iri, Literal, Term, Triple, term_text

_VAR_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class Variable:
    """A named placeholder in a triple pattern."""

    name: str

    def __post_init__(self):
        if not _VAR_NAME_RE.fullmatch(self.name):
            raise ValueError(f"malformed variable name: {self.name!r}")


PatternTerm = Union[Term, Variable]


@dataclass(frozen=True)
class TriplePattern:
    """A triple with variables allowed in any position.

    Positions that could never match are rejected up front: literals cannot
    be subjects and predicates must be IRIs.
    """

    subject: PatternTerm
    predicate: PatternTerm
    object: PatternTerm

    def __post_init__(self):
        if not isinstance(self.subject, (Iri, BlankNode, Variable)):
            raise ValueError("pattern subject must be an IRI, blank node, or variable")
        if not isinstance(self.predicate, (Iri, Variable)):
            raise ValueError("pattern predicate must be an IRI or variable")
        if not isinstance(self.object, (Iri, Literal, BlankNode, Variable)):
            raise ValueError("pattern object must be a term or variable")

    def variables(self) -> tuple[str, ...]:
        """Variable names in subject, predicate, object order, deduplicated."""
        seen: list[str] = []
        for part in (self.subject, self.predicate, self.object):
            if isinstance(part, Variable) and part.name not in seen:
                seen.append(part.name)
        return tuple(seen)

    def bound_count(self) -> int:
        return sum(
            not isinstance(part, Variable)
            for part in (self.subject, self.predicate, self.object)
        )


class RwLock:
    """Reader-writer lock, writer-preferring, reentrant on both sides.

    A thread already holding the read side may re-enter it even while a
    writer waits; a thread holding the write side may read and write freely.
    Upgrading (read -> write) is not supported and will deadlock; code in
    this package always takes the write side first.
    """

    def __init__(self):
        self._cond = threading.Condition()
        self._readers = 0
        self._writer: int | None = None
        self._writer_depth = 0
        self._writers_waiting = 0
        self._local = threading.local()

    def _read_depth(self) -> int:
        return getattr(self._local, "depth", 0)

    @contextmanager
    def read(self):
        me = threading.get_ident()
        depth = self._read_depth()
        if depth == 0 and self._writer != me:
            with self._cond:
                while self._writer is not None or self._writers_waiting:
                    self._cond.wait()
                self._readers += 1
        self._local.depth = depth + 1
        try:
            yield
        finally:
            self._local.depth = depth
            if depth == 0 and self._writer != me:
                with self._cond:
                    self._readers -= 1
                    self._cond.notify_all()

    @contextmanager
    def write(self):
        me = threading.get_ident()
        if self._writer == me:
            self._writer_depth += 1
            try:
                yield
            finally:
                self._writer_depth -= 1
            return
        with self._cond:
            self._writers_waiting += 1
            try:
                while self._readers or self._writer is not None:
                    self._cond.wait()
            finally:
                self._writers_waiting -= 1
            self._writer = me
            self._writer_depth = 1
        try:
            yield
        finally:
            with self._cond:
                self._writer = None
                self._writer_depth = 0
                self._cond.notify_all()


class Store:
    """In-memory indexed triple set."""

    def __init__(self, prefixes: dict[str, str] | None = None):
        self.prefixes: dict[str, str] = dict(prefixes or {})
        self._lock = RwLock()
        self._term_ids: dict[Term, int] = {}
        self._terms: list[Term] = []  # id -> term; ids mint monotonically
        self._tuples: set[tuple[int, int, int]] = set()
        self._spo: list[tuple[int, int, int]] = []
        self._pos: list[tuple[int, int, int]] = []
        self._osp: list[tuple[int, int, int]] = []

    # -- locking -----------------------------------------------------------

    def read_lock(self):
        return self._lock.read()

    def write_lock(self):
        return self._lock.write()

    # -- encoding ----------------------------------------------------------

    def _intern(self, term: Term) -> int:
        got = self._term_ids.get(term)
        if got is None:
            got = len(self._terms)
            self._term_ids[term] = got
            self._terms.append(term)
        return got

    def _lookup(self, term: Term) -> int | None:
        return self._term_ids.get(term)

    def _decode(self, ids: tuple[int, int, int], order: str) -> Triple:
        by_pos = dict(zip(order, ids))
        return Triple(
            self._terms[by_pos["s"]],
            self._terms[by_pos["p"]],
            self._terms[by_pos["o"]],
        )

    # -- mutation ----------------------------------------------------------

    def insert(self, triple: Triple) -> bool:
        """Insert one triple; returns False if it was already present."""
        if not isinstance(triple, Triple):
            raise TypeError("expected a Triple")
        with self._lock.write():
            return self._insert_locked(triple)

    def _insert_locked(self, triple: Triple) -> bool:
        s = self._intern(triple.subject)
        p = self._intern(triple.predicate)
        o = self._intern(triple.object)
        key = (s, p, o)
        if key in self._tuples:
            return False
        self._tuples.add(key)
        insort(self._spo, (s, p, o))
        insort(self._pos, (p, o, s))
        insort(self._osp, (o, s, p))
        return True

    def insert_many(self, triples: Iterable[Triple]) -> int:
        """Insert triples under one write hold; returns how many were new."""
        with self._lock.write():
            return sum(self._insert_locked(t) for t in triples)

    def insert_graph(self, graph: Graph) -> int:
        """Insert a graph in canonical term order so id minting is stable."""
        ordered = sorted(
            graph,
            key=lambda t: (term_text(t.subject), term_text(t.predicate), term_text(t.object)),
        )
        for label, ns in graph.prefixes.items():
            self.prefixes.setdefault(label, ns)
        return self.insert_many(ordered)

    def remove_subject(self, subject: Term) -> int:
        """Remove every triple with the given subject; returns the count."""
        with self._lock.write():
            sid = self._lookup(subject)
            if sid is None:
                return 0
            lo = bisect_left(self._spo, (sid,))
            hi = bisect_left(self._spo, (sid + 1,))
            doomed = self._spo[lo:hi]
            if not doomed:
                return 0
            for s, p, o in doomed:
                self._tuples.discard((s, p, o))
            doomed_set = set(doomed)
            self._spo = [t for t in self._spo if t not in doomed_set]
            self._pos = [t for t in self._pos if (t[2], t[0], t[1]) not in doomed_set]
            self._osp = [t for t in self._osp if (t[1], t[2], t[0]) not in doomed_set]
            return len(doomed)

    # -- queries -----------------------------------------------------------

    def __len__(self) -> int:
        with self._lock.read():
            return len(self._tuples)

    def __contains__(self, triple: Triple) -> bool:
        with self._lock.read():
            ids = tuple(self._lookup(t) for t in (triple.subject, triple.predicate, triple.object))
            return None not in ids and ids in self._tuples

    def _plan(self, pattern: TriplePattern):
        """Pick the index by bound-position shape.

        Bound subject -> SPO, else bound predicate -> POS, else bound
        object -> OSP, else full SPO scan. Returns (index, order, prefix ids,
        residual position filters) or None when a bound term is unknown.
        """
        s = None if isinstance(pattern.subject, Variable) else self._lookup(pattern.subject)
        p = None if isinstance(pattern.predicate, Variable) else self._lookup(pattern.predicate)
        o = None if isinstance(pattern.object, Variable) else self._lookup(pattern.object)
        for part, ident in ((pattern.subject, s), (pattern.predicate, p), (pattern.object, o)):
            if not isinstance(part, Variable) and ident is None:
                return None

        if s is not None:
            index, order = self._spo, "spo"
            ordered = (s, p, o)
        elif p is not None:
            index, order = self._pos, "pos"
            ordered = (p, o, s)
        elif o is not None:
            index, order = self._osp, "osp"
            ordered = (o, s, p)
        else:
            index, order = self._spo, "spo"
            ordered = (None, None, None)

        prefix: list[int] = []
        for ident in ordered:
            if ident is None:
                break
            prefix.append(ident)
        residual = [
            (pos, ident) for pos, ident in enumerate(ordered[len(prefix):], start=len(prefix))
            if ident is not None
        ]
        return index, order, tuple(prefix), residual

    def _scan(self, index: list, prefix: tuple[int, ...]) -> tuple[int, int]:
        if not prefix:
            return 0, len(index)
        lo = bisect_left(index, prefix)
        hi = bisect_left(index, prefix[:-1] + (prefix[-1] + 1,))
        return lo, hi

    def match(self, pattern: TriplePattern) -> Iterator[Triple]:
        """Stream triples matching the pattern, in index order.

        The matching rows are snapshotted under the read lock before the
        first triple is yielded, so concurrent writes never tear a stream.
        """
        with self._lock.read():
            plan = self._plan(pattern)
            if plan is None:
                rows: list[tuple[int, int, int]] = []
                order = "spo"
            else:
                index, order, prefix, residual = plan
                lo, hi = self._scan(index, prefix)
                rows = [
                    row
                    for row in index[lo:hi]
                    if all(row[pos] == ident for pos, ident in residual)
                ]
        for row in rows:
            yield self._decode(row, order)

    def count(self, pattern: TriplePattern) -> int:
        """Number of matching triples; cheap for prefix-only patterns."""
        with self._lock.read():
            plan = self._plan(pattern)
            if plan is None:
                return 0
            index, _, prefix, residual = plan
            lo, hi = self._scan(index, prefix)
            if not residual:
                return hi - lo
            return sum(
                all(row[pos] == ident for pos, ident in residual)
                for row in index[lo:hi]
            )

    def triples(self) -> list[Triple]:
        """Snapshot of the full triple set in SPO index order."""
        with self._lock.read():
            rows = list(self._spo)
        return [self._decode(row, "spo") for row in rows]

    def to_graph(self) -> Graph:
        return Graph(self.triples(), prefixes=self.prefixes)
