"""RDF terms, triples, graphs, and a Turtle subset parser/serializer.

The supported Turtle subset covers what the bundled ontology and the knowledge
store emit: prefix declarations (@prefix and SPARQL-style PREFIX), IRI
references, prefixed names, the 'a' shorthand, string literals with optional
language tag or datatype, bare integer/decimal literals, labeled blank nodes,
comments, and ';'/',' lists. Collections, anonymous blank nodes, @base and
triple-quoted strings are rejected with a positioned syntax error.

Serialization is deterministic: triples are grouped by subject and ordered
lexicographically by their rendered form, so equal graphs with equal prefix
maps serialize to byte-identical text.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import groupby
from typing import Iterable, Iterator, Union

from . import lexer
from .errors import TurtleSyntaxError, UnknownPrefixError
from .vocab import RDF_TYPE, XSD_DECIMAL, XSD_INTEGER, XSD_STRING

_BNODE_LABEL_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
_LANG_RE = re.compile(r"[A-Za-z]+(?:-[A-Za-z0-9]+)*\Z")
_LOCAL_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class Iri:
    """An absolute IRI. No whitespace or angle brackets allowed."""

    value: str

    def __post_init__(self):
        if not self.value:
            raise ValueError("IRI must be non-empty")
        if any(c in self.value for c in "<> \t\n\r"):
            raise ValueError(f"IRI contains forbidden character: {self.value!r}")


@dataclass(frozen=True)
class Literal:
    """A literal term.

    Carries a datatype IRI exactly when it has no language tag; plain literals
    default to xsd:string. Equality is structural on the lexical form, so
    "1"^^xsd:integer and "1.0"^^xsd:decimal are distinct terms.
    """

    lexical: str
    datatype: str | None = None
    language: str | None = None

    def __post_init__(self):
        if self.language is not None:
            if self.datatype is not None:
                raise ValueError("a literal cannot have both datatype and language")
            if not _LANG_RE.fullmatch(self.language):
                raise ValueError(f"malformed language tag: {self.language!r}")
        else:
            dt = self.datatype
            if dt is None:
                dt = XSD_STRING
            elif isinstance(dt, Iri):
                dt = dt.value
            else:
                Iri(dt)  # reuse the IRI character rules for validation
            object.__setattr__(self, "datatype", dt)


@dataclass(frozen=True)
class BlankNode:
    """A labeled blank node; identity holds within a single document."""

    label: str

    def __post_init__(self):
        if not _BNODE_LABEL_RE.fullmatch(self.label):
            raise ValueError(f"malformed blank node label: {self.label!r}")


Term = Union[Iri, Literal, BlankNode]


@dataclass(frozen=True)
class Triple:
    """A single statement. Predicates are IRIs; literals cannot be subjects."""

    subject: Term
    predicate: Iri
    object: Term

    def __post_init__(self):
        if not isinstance(self.subject, (Iri, BlankNode)):
            raise ValueError("triple subject must be an IRI or blank node")
        if not isinstance(self.predicate, Iri):
            raise ValueError("triple predicate must be an IRI")
        if not isinstance(self.object, (Iri, Literal, BlankNode)):
            raise ValueError("triple object must be a term")


class Graph:
    """A set of triples plus a prefix map. Equality compares the triple sets."""

    def __init__(self, triples: Iterable[Triple] = (), prefixes: dict[str, str] | None = None):
        self._triples: set[Triple] = set()
        self.prefixes: dict[str, str] = dict(prefixes or {})
        for t in triples:
            self.add(t)

    @property
    def triples(self) -> set[Triple]:
        """The underlying (live) set of triples."""
        return self._triples

    def add(self, triple: Triple) -> None:
        if not isinstance(triple, Triple):
            raise TypeError("Graph holds Triple values only")
        self._triples.add(triple)

    def update(self, triples: Iterable[Triple]) -> None:
        for t in triples:
            self.add(t)

    def __len__(self) -> int:
        return len(self._triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._triples)

    def __contains__(self, triple: Triple) -> bool:
        return triple in self._triples

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._triples == other._triples

    __hash__ = None  # mutable

    def __repr__(self) -> str:
        return f"Graph({len(self._triples)} triples, {len(self.prefixes)} prefixes)"


def expand(name: str, prefixes: dict[str, str]) -> Iri:
    """Expand a prefixed name like 'AgriOnt:SoilPH' against a prefix map."""
    if ":" not in name:
        raise ValueError(f"not a prefixed name: {name!r}")
    label, local = name.split(":", 1)
    if label not in prefixes:
        raise UnknownPrefixError(label)
    return Iri(prefixes[label] + local)


_ESCAPE_MAP = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}


def _escape(text: str) -> str:
    return "".join(_ESCAPE_MAP.get(c, c) for c in text)


def term_text(term: Term) -> str:
    """Canonical unabbreviated rendering, used for deterministic ordering."""
    if isinstance(term, Iri):
        return f"<{term.value}>"
    if isinstance(term, BlankNode):
        return f"_:{term.label}"
    if isinstance(term, Literal):
        body = f'"{_escape(term.lexical)}"'
        if term.language is not None:
            return f"{body}@{term.language}"
        if term.datatype == XSD_STRING:
            return body
        return f"{body}^^<{term.datatype}>"
    raise TypeError(f"not a term: {term!r}")


class _TurtleParser:
    def __init__(self, tokens: list[lexer.Token], prefixes: dict[str, str]):
        self.tokens = tokens
        self.pos = 0
        self.graph = Graph(prefixes=prefixes)

    def peek(self) -> lexer.Token:
        return self.tokens[self.pos]

    def take(self) -> lexer.Token:
        tok = self.tokens[self.pos]
        if tok.kind != lexer.EOF:
            self.pos += 1
        return tok

    def fail(self, tok: lexer.Token, message: str):
        raise TurtleSyntaxError(tok.line, tok.col, message)

    def expect_punct(self, value: str) -> lexer.Token:
        tok = self.take()
        if tok.kind != lexer.PUNCT or tok.value != value:
            self.fail(tok, f"expected {value!r}")
        return tok

    def parse(self) -> Graph:
        while True:
            tok = self.peek()
            if tok.kind == lexer.EOF:
                return self.graph
            if tok.kind == lexer.ATWORD and tok.value == "prefix":
                self.take()
                self._prefix_declaration(require_dot=True)
            elif tok.kind == lexer.ATWORD and tok.value == "base":
                self.fail(tok, "@base is not supported")
            elif tok.kind == lexer.WORD and tok.value.lower() == "prefix":
                self.take()
                self._prefix_declaration(require_dot=False)
            elif tok.kind == lexer.WORD and tok.value.lower() == "base":
                self.fail(tok, "BASE is not supported")
            else:
                self._triples_block()

    def _prefix_declaration(self, require_dot: bool):
        tok = self.take()
        if tok.kind != lexer.PNAME or tok.value[1] != "":
            self.fail(tok, "expected a prefix label ending in ':'")
        label = tok.value[0]
        iri_tok = self.take()
        if iri_tok.kind != lexer.IRIREF:
            self.fail(iri_tok, "expected an IRI reference")
        self.graph.prefixes[label] = iri_tok.value
        if require_dot:
            self.expect_punct(".")
        elif self.peek().kind == lexer.PUNCT and self.peek().value == ".":
            self.take()

    def _mk_iri(self, tok: lexer.Token, value: str) -> Iri:
        try:
            return Iri(value)
        except ValueError as exc:
            self.fail(tok, str(exc))

    def _expand(self, tok: lexer.Token) -> Iri:
        label, local = tok.value
        if label not in self.graph.prefixes:
            raise UnknownPrefixError(label)
        return self._mk_iri(tok, self.graph.prefixes[label] + local)

    def _subject(self) -> Term:
        tok = self.take()
        if tok.kind == lexer.IRIREF:
            return self._mk_iri(tok, tok.value)
        if tok.kind == lexer.PNAME:
            return self._expand(tok)
        if tok.kind == lexer.BNODE:
            return BlankNode(tok.value)
        if tok.kind == lexer.PUNCT and tok.value == "[":
            self.fail(tok, "anonymous blank nodes are not supported")
        if tok.kind == lexer.PUNCT and tok.value == "(":
            self.fail(tok, "collections are not supported")
        self.fail(tok, "expected a subject (IRI, prefixed name, or blank node)")

    def _predicate(self) -> Iri:
        tok = self.take()
        if tok.kind == lexer.WORD and tok.value == "a":
            return Iri(RDF_TYPE)
        if tok.kind == lexer.IRIREF:
            return self._mk_iri(tok, tok.value)
        if tok.kind == lexer.PNAME:
            return self._expand(tok)
        self.fail(tok, "expected a predicate (IRI, prefixed name, or 'a')")

    def _object(self) -> Term:
        tok = self.take()
        if tok.kind == lexer.IRIREF:
            return self._mk_iri(tok, tok.value)
        if tok.kind == lexer.PNAME:
            return self._expand(tok)
        if tok.kind == lexer.BNODE:
            return BlankNode(tok.value)
        if tok.kind == lexer.NUMBER:
            lexical, kind = tok.value
            datatype = XSD_INTEGER if kind == "integer" else XSD_DECIMAL
            return Literal(lexical, datatype)
        if tok.kind == lexer.STRING:
            return self._literal_suffix(tok.value)
        if tok.kind == lexer.PUNCT and tok.value == "[":
            self.fail(tok, "anonymous blank nodes are not supported")
        if tok.kind == lexer.PUNCT and tok.value == "(":
            self.fail(tok, "collections are not supported")
        self.fail(tok, "expected an object term")

    def _literal_suffix(self, lexical: str) -> Literal:
        tok = self.peek()
        if tok.kind == lexer.ATWORD:
            self.take()
            try:
                return Literal(lexical, language=tok.value)
            except ValueError as exc:
                self.fail(tok, str(exc))
        if tok.kind == lexer.PUNCT and tok.value == "^^":
            self.take()
            dt_tok = self.take()
            if dt_tok.kind == lexer.IRIREF:
                datatype = self._mk_iri(dt_tok, dt_tok.value)
            elif dt_tok.kind == lexer.PNAME:
                datatype = self._expand(dt_tok)
            else:
                self.fail(dt_tok, "expected a datatype IRI after '^^'")
            return Literal(lexical, datatype.value)
        return Literal(lexical)

    def _triples_block(self):
        subject = self._subject()
        while True:
            predicate = self._predicate()
            while True:
                self.graph.add(Triple(subject, predicate, self._object()))
                tok = self.peek()
                if tok.kind == lexer.PUNCT and tok.value == ",":
                    self.take()
                    continue
                break
            tok = self.take()
            if tok.kind == lexer.PUNCT and tok.value == ";":
                nxt = self.peek()
                while nxt.kind == lexer.PUNCT and nxt.value == ";":
                    self.take()
                    nxt = self.peek()
                if nxt.kind == lexer.PUNCT and nxt.value == ".":
                    self.take()
                    return
                continue
            if tok.kind == lexer.PUNCT and tok.value == ".":
                return
            self.fail(tok, "expected '.', ';' or ',' after object")


def parse_turtle(text: str, prefixes: dict[str, str] | None = None) -> Graph:
    """Parse Turtle subset text into a Graph.

    Raises TurtleSyntaxError with line/column on malformed or unsupported
    input, and UnknownPrefixError for undeclared prefix labels. Never raises
    anything else, regardless of input.
    """
    tokens = lexer.tokenize(text, TurtleSyntaxError)
    return _TurtleParser(tokens, dict(prefixes or {})).parse()


def _abbreviation_table(prefixes: dict[str, str]) -> list[tuple[str, str]]:
    # Longest namespace wins; ties broken by label so output stays stable.
    return sorted(prefixes.items(), key=lambda kv: (-len(kv[1]), kv[0]))


def _render_iri(value: str, table: list[tuple[str, str]]) -> str:
    for label, ns in table:
        if value.startswith(ns):
            local = value[len(ns):]
            if local == "" or _LOCAL_RE.fullmatch(local):
                return f"{label}:{local}"
    return f"<{value}>"


def _render_term(term: Term, table: list[tuple[str, str]]) -> str:
    if isinstance(term, Iri):
        return _render_iri(term.value, table)
    if isinstance(term, BlankNode):
        return f"_:{term.label}"
    body = f'"{_escape(term.lexical)}"'
    if term.language is not None:
        return f"{body}@{term.language}"
    if term.datatype == XSD_STRING:
        return body
    return f"{body}^^{_render_iri(term.datatype, table)}"


def serialize_turtle(graph: Graph) -> str:
    """Serialize a graph to deterministic Turtle text.

    Triples are grouped by subject; subjects, predicates and objects are each
    ordered lexicographically by their rendered form. Equal graphs with equal
    prefix maps produce byte-identical output.
    """
    table = _abbreviation_table(graph.prefixes)
    header = [f"@prefix {label}: <{ns}> ." for label, ns in sorted(graph.prefixes.items())]

    rendered = []
    for t in graph:
        pred = "a" if t.predicate.value == RDF_TYPE else _render_term(t.predicate, table)
        rendered.append((_render_term(t.subject, table), pred, _render_term(t.object, table)))
    rendered.sort()

    blocks = []
    for subject, subject_rows in groupby(rendered, key=lambda r: r[0]):
        parts = []
        for predicate, pred_rows in groupby(subject_rows, key=lambda r: r[1]):
            objects = ", ".join(r[2] for r in pred_rows)
            parts.append(f"{predicate} {objects}")
        first = f"{subject} {parts[0]}"
        rest = [f"    {p}" for p in parts[1:]]
        blocks.append(" ;\n".join([first] + rest) + " .")

    sections = []
    if header:
        sections.append("\n".join(header))
    if blocks:
        sections.append("\n\n".join(blocks))
    if not sections:
        return ""
    return "\n\n".join(sections) + "\n"
