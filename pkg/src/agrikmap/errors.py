"""Exception types raised by the package.

Everything derives from AgriKMapError so callers (CLI, HTTP service) can map
domain failures to user errors in one place.
"""

from __future__ import annotations


class AgriKMapError(Exception):
    """Base class for all domain errors."""


class ParseIssue(AgriKMapError):
    """A parse failure with source position attached."""

    def __init__(self, line: int, column: int, message: str):
        self.line = line
        self.column = column
        self.message = message
        super().__init__(f"line {line}, column {column}: {message}")


class TurtleSyntaxError(ParseIssue):
    """Input text is outside the supported Turtle subset or malformed."""


class QuerySyntaxError(ParseIssue):
    """Query text is malformed or structurally invalid."""


class UnknownPrefixError(AgriKMapError):
    """A prefixed name used a label with no declaration in scope."""

    def __init__(self, label: str):
        self.label = label
        super().__init__(f"unknown prefix: {label!r}")


class UnsupportedFeatureError(AgriKMapError):
    """A recognised query-language feature outside the supported subset."""

    def __init__(self, feature: str):
        self.feature = feature
        super().__init__(f"unsupported query feature: {feature}")


class CyclicHierarchyError(AgriKMapError):
    """The subclass relation contains a cycle."""

    def __init__(self, iri: str):
        self.iri = iri
        super().__init__(f"cyclic subclass hierarchy through {iri}")


class UnknownConceptError(AgriKMapError):
    """A concept name resolved to nothing in the ontology."""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unknown concept: {name!r}")


class AmbiguousConceptError(AgriKMapError):
    """A concept name matched more than one ontology class."""

    def __init__(self, name: str, candidates: tuple[str, ...]):
        self.name = name
        self.candidates = candidates
        listed = ", ".join(sorted(candidates))
        super().__init__(f"ambiguous concept {name!r}: matches {listed}")


class SchemaError(AgriKMapError):
    """A model descriptor violated the documented JSON schema."""

    def __init__(self, field: str, reason: str):
        self.field = field
        self.reason = reason
        super().__init__(f"descriptor field {field!r}: {reason}")


class DuplicateModelError(AgriKMapError):
    """A model id is already in the store with a different descriptor."""

    def __init__(self, model_id: str):
        self.model_id = model_id
        super().__init__(f"model {model_id!r} already ingested with different content")


class UnknownModelError(AgriKMapError):
    """No model with the given id is present in the store."""

    def __init__(self, model_id: str):
        self.model_id = model_id
        super().__init__(f"unknown model: {model_id!r}")


class InvalidRepresentationError(AgriKMapError):
    """A knowledge representation failed validation."""

    def __init__(self, violations):
        self.violations = list(violations)
        lines = "; ".join(str(v) for v in self.violations) or "structurally unusable"
        super().__init__(f"invalid representation: {lines}")


class LoadError(AgriKMapError):
    """A data or ontology file could not be loaded at startup."""


class BindError(AgriKMapError):
    """The server could not bind its address/port."""
