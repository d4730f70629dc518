"""Basic-graph-pattern query engine over the triple store.

Supported grammar: PREFIX declarations, SELECT with an explicit variable list
or '*', a WHERE group of dot-separated triple patterns, and LIMIT. Every
other recognised keyword (OPTIONAL, FILTER, UNION, ORDER BY, ...) raises
UnsupportedFeatureError naming the feature, so callers can report exactly
what was rejected instead of silently returning wrong answers.

Evaluation reorders patterns by ascending estimated cardinality (bound
position count, then an index probe count), then runs binding-propagation
nested-loop joins against the store indexes. The final solution list is
sorted lexicographically by the rendered projected values, which makes
results reproducible across runs; LIMIT takes a prefix of that ordering.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import lexer
from .errors import QuerySyntaxError, UnknownPrefixError, UnsupportedFeatureError
from .rdf import Iri, Literal, Term, term_text
from .store import Store, TriplePattern, Variable
from .vocab import RDF_TYPE, XSD_DECIMAL, XSD_INTEGER, XSD_STRING

# Keywords that are valid SPARQL but outside the supported subset. Values are
# the names reported to the caller.
_UNSUPPORTED = {
    "OPTIONAL": "OPTIONAL",
    "FILTER": "FILTER",
    "UNION": "UNION",
    "MINUS": "MINUS",
    "GRAPH": "GRAPH",
    "SERVICE": "SERVICE",
    "BIND": "BIND",
    "VALUES": "VALUES",
    "ORDER": "ORDER BY",
    "GROUP": "GROUP BY",
    "HAVING": "HAVING",
    "OFFSET": "OFFSET",
    "DISTINCT": "DISTINCT",
    "REDUCED": "REDUCED",
    "CONSTRUCT": "CONSTRUCT",
    "ASK": "ASK",
    "DESCRIBE": "DESCRIBE",
    "INSERT": "INSERT",
    "DELETE": "DELETE",
    "FROM": "FROM",
    "BASE": "BASE",
    "EXISTS": "EXISTS",
    "WITH": "WITH",
}


@dataclass(frozen=True)
class Query:
    """A parsed query. projection is None for SELECT *."""

    prefixes: dict[str, str]
    projection: tuple[str, ...] | None
    patterns: tuple[TriplePattern, ...]
    limit: int | None = None

    def pattern_variables(self) -> tuple[str, ...]:
        """All variables in first-appearance order over the written patterns."""
        seen: list[str] = []
        for pat in self.patterns:
            for name in pat.variables():
                if name not in seen:
                    seen.append(name)
        return tuple(seen)


@dataclass
class BindingSet:
    """Ordered query solutions; each solution binds exactly the projected vars."""

    variables: list[str]
    solutions: list[dict[str, Term]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.solutions)


class _QueryParser:
    def __init__(self, tokens: list[lexer.Token]):
        self.tokens = tokens
        self.pos = 0
        self.prefixes: dict[str, str] = {}

    def peek(self) -> lexer.Token:
        return self.tokens[self.pos]

    def take(self) -> lexer.Token:
        tok = self.tokens[self.pos]
        if tok.kind != lexer.EOF:
            self.pos += 1
        return tok

    def fail(self, tok: lexer.Token, message: str):
        raise QuerySyntaxError(tok.line, tok.col, message)

    def _check_unsupported(self, tok: lexer.Token):
        if tok.kind == lexer.WORD and tok.value.upper() in _UNSUPPORTED:
            raise UnsupportedFeatureError(_UNSUPPORTED[tok.value.upper()])

    def _is_word(self, tok: lexer.Token, word: str) -> bool:
        return tok.kind == lexer.WORD and tok.value.upper() == word

    def parse(self) -> Query:
        while self._is_word(self.peek(), "PREFIX"):
            self.take()
            label_tok = self.take()
            if label_tok.kind != lexer.PNAME or label_tok.value[1] != "":
                self.fail(label_tok, "expected a prefix label ending in ':'")
            iri_tok = self.take()
            if iri_tok.kind != lexer.IRIREF:
                self.fail(iri_tok, "expected an IRI reference")
            self.prefixes[label_tok.value[0]] = iri_tok.value

        tok = self.peek()
        self._check_unsupported(tok)
        if not self._is_word(tok, "SELECT"):
            self.fail(tok, "expected SELECT")
        self.take()

        self._check_unsupported(self.peek())
        projection = self._projection()

        tok = self.take()
        if not self._is_word(tok, "WHERE"):
            self._check_unsupported(tok)
            self.fail(tok, "expected WHERE")
        open_tok = self.take()
        if open_tok.kind != lexer.PUNCT or open_tok.value != "{":
            self.fail(open_tok, "expected '{'")

        patterns = self._group(open_tok)
        limit = self._modifiers()

        end = self.take()
        if end.kind != lexer.EOF:
            self._check_unsupported(end)
            self.fail(end, "unexpected trailing input")

        query = Query(dict(self.prefixes), projection, tuple(patterns), limit)
        if projection is not None:
            in_patterns = set(query.pattern_variables())
            for name in projection:
                if name not in in_patterns:
                    self.fail(self.tokens[0], f"projected variable ?{name} not used in any pattern")
        return query

    def _projection(self) -> tuple[str, ...] | None:
        tok = self.peek()
        if tok.kind == lexer.PUNCT and tok.value == "*":
            self.take()
            return None
        names: list[str] = []
        while self.peek().kind == lexer.VAR:
            name = self.take().value
            if name in names:
                self.fail(tok, f"variable ?{name} projected twice")
            names.append(name)
        if not names:
            self._check_unsupported(self.peek())
            self.fail(self.peek(), "expected '*' or at least one variable after SELECT")
        return tuple(names)

    def _group(self, open_tok: lexer.Token) -> list[TriplePattern]:
        patterns: list[TriplePattern] = []
        while True:
            tok = self.peek()
            if tok.kind == lexer.PUNCT and tok.value == "}":
                self.take()
                break
            if tok.kind == lexer.EOF:
                self.fail(open_tok, "unterminated WHERE group")
            patterns.append(self._pattern())
            tok = self.peek()
            if tok.kind == lexer.PUNCT and tok.value == ".":
                self.take()
        if not patterns:
            self.fail(open_tok, "empty WHERE group")
        return patterns

    def _pattern(self) -> TriplePattern:
        subject = self._term(position="subject")
        predicate = self._term(position="predicate")
        obj = self._term(position="object")
        try:
            return TriplePattern(subject, predicate, obj)
        except ValueError as exc:
            self.fail(self.peek(), str(exc))

    def _expand(self, tok: lexer.Token) -> Iri:
        label, local = tok.value
        if label not in self.prefixes:
            raise UnknownPrefixError(label)
        try:
            return Iri(self.prefixes[label] + local)
        except ValueError as exc:
            self.fail(tok, str(exc))

    def _term(self, position: str):
        tok = self.take()
        self._check_unsupported(tok)
        if tok.kind == lexer.VAR:
            return Variable(tok.value)
        if tok.kind == lexer.IRIREF:
            try:
                return Iri(tok.value)
            except ValueError as exc:
                self.fail(tok, str(exc))
        if tok.kind == lexer.PNAME:
            return self._expand(tok)
        if tok.kind == lexer.WORD and tok.value == "a" and position == "predicate":
            return Iri(RDF_TYPE)
        if position == "object":
            if tok.kind == lexer.STRING:
                return self._literal_suffix(tok.value)
            if tok.kind == lexer.NUMBER:
                lexical, kind = tok.value
                return Literal(lexical, XSD_INTEGER if kind == "integer" else XSD_DECIMAL)
        if tok.kind == lexer.BNODE:
            self.fail(tok, "blank nodes are not supported in queries")
        self.fail(tok, f"expected {position} term")

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
            dt = self.take()
            if dt.kind == lexer.IRIREF:
                return Literal(lexical, dt.value)
            if dt.kind == lexer.PNAME:
                return Literal(lexical, self._expand(dt).value)
            self.fail(dt, "expected a datatype IRI after '^^'")
        return Literal(lexical)

    def _modifiers(self) -> int | None:
        tok = self.peek()
        if tok.kind == lexer.EOF:
            return None
        if self._is_word(tok, "LIMIT"):
            self.take()
            n_tok = self.take()
            if n_tok.kind != lexer.NUMBER or n_tok.value[1] != "integer":
                self.fail(n_tok, "LIMIT expects an integer")
            n = int(n_tok.value[0])
            if n <= 0:
                self.fail(n_tok, "LIMIT expects a positive integer")
            return n
        self._check_unsupported(tok)
        return None


def _unsupported_in(tokens) -> UnsupportedFeatureError | None:
    for tok in tokens:
        if tok.kind == lexer.WORD and tok.value.upper() in _UNSUPPORTED:
            return UnsupportedFeatureError(_UNSUPPORTED[tok.value.upper()])
    return None


def parse_query(text: str) -> Query:
    """Parse query text; see module docstring for the supported subset.

    Any use of a recognised-but-unsupported keyword is reported by name,
    even when it appears inside syntax the tokenizer itself cannot digest
    (e.g. the expression between FILTER's parentheses).
    """
    try:
        tokens = lexer.tokenize(text, QuerySyntaxError)
    except QuerySyntaxError as exc:
        lines = text.splitlines(keepends=True)
        offset = sum(len(line) for line in lines[: exc.line - 1]) + (exc.column - 1)
        try:
            prefix_tokens = lexer.tokenize(text[:offset], QuerySyntaxError)
        except QuerySyntaxError:
            prefix_tokens = []
        found = _unsupported_in(prefix_tokens)
        if found is not None:
            raise found from None
        raise
    found = _unsupported_in(tokens)
    if found is not None:
        raise found
    return _QueryParser(tokens).parse()


def _substitute(pattern: TriplePattern, binding: dict[str, Term]) -> TriplePattern | None:
    """Inline bound variables; None when a bound value can never occupy its
    position (e.g. a literal landing in subject place), which simply means
    the binding admits no solutions for this pattern."""

    def sub(part):
        if isinstance(part, Variable) and part.name in binding:
            return binding[part.name]
        return part

    try:
        return TriplePattern(sub(pattern.subject), sub(pattern.predicate), sub(pattern.object))
    except ValueError:
        return None


def _extend(pattern: TriplePattern, triple, binding: dict[str, Term]) -> dict[str, Term] | None:
    """Bind the pattern's variables against a matched triple.

    Returns None when a variable repeated inside the pattern would need two
    different values.
    """
    out = dict(binding)
    for part, value in (
        (pattern.subject, triple.subject),
        (pattern.predicate, triple.predicate),
        (pattern.object, triple.object),
    ):
        if isinstance(part, Variable):
            seen = out.get(part.name)
            if seen is None:
                out[part.name] = value
            elif seen != value:
                return None
    return out


def evaluate(query: Query, store: Store) -> BindingSet:
    """Evaluate a parsed query against a store.

    The whole evaluation runs under one read hold, so a concurrent ingest is
    either entirely visible or entirely invisible to a single query.
    """
    projection = list(query.projection) if query.projection is not None else list(query.pattern_variables())

    with store.read_lock():
        ordered = sorted(
            enumerate(query.patterns),
            key=lambda item: (-item[1].bound_count(), store.count(item[1]), item[0]),
        )
        solutions: list[dict[str, Term]] = [{}]
        for _, pattern in ordered:
            if not solutions:
                break
            next_solutions: list[dict[str, Term]] = []
            for binding in solutions:
                concrete = _substitute(pattern, binding)
                if concrete is None:
                    continue
                for triple in store.match(concrete):
                    extended = _extend(concrete, triple, binding)
                    if extended is not None:
                        next_solutions.append(extended)
            solutions = next_solutions

    rows = [{name: sol[name] for name in projection} for sol in solutions]
    rows.sort(key=lambda row: tuple(term_text(row[name]) for name in projection))
    if query.limit is not None:
        rows = rows[: query.limit]
    return BindingSet(projection, rows)


def term_json(term: Term) -> dict[str, str]:
    """One term in the results-JSON shape (uri / literal / bnode)."""
    if isinstance(term, Iri):
        return {"type": "uri", "value": term.value}
    if isinstance(term, Literal):
        out = {"type": "literal", "value": term.lexical}
        if term.language is not None:
            out["xml:lang"] = term.language
        elif term.datatype != XSD_STRING:
            out["datatype"] = term.datatype
        return out
    return {"type": "bnode", "value": term.label}


def results_to_json(bindings: BindingSet) -> dict:
    """Render solutions in the W3C SPARQL 1.1 results JSON shape."""
    return {
        "head": {"vars": list(bindings.variables)},
        "results": {
            "bindings": [
                {name: term_json(sol[name]) for name in bindings.variables}
                for sol in bindings.solutions
            ]
        },
    }
