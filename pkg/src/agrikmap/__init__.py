"""Ontology-backed knowledge map for mined agricultural models.

Mined models are described by small JSON descriptors, materialized as RDF
triples over a fixed agricultural ontology, stored in an indexed in-memory
triple store, and queried through a SPARQL subset — via Python, a CLI, or an
HTTP endpoint.
"""

from .errors import (
    AgriKMapError,
    AmbiguousConceptError,
    BindError,
    CyclicHierarchyError,
    DuplicateModelError,
    InvalidRepresentationError,
    LoadError,
    ParseIssue,
    QuerySyntaxError,
    SchemaError,
    TurtleSyntaxError,
    UnknownConceptError,
    UnknownModelError,
    UnknownPrefixError,
    UnsupportedFeatureError,
)
from .kmodel import (
    Concept,
    Instance,
    KnowledgeRepresentation,
    Relation,
    RelationKind,
    State,
    TaskKind,
    Transformation,
    Violation,
    to_triples,
    validate,
)
from .ontology import (
    OntologyIndex,
    OntologyMetrics,
    compute_metrics,
    load_ontology,
    local_name,
    resolve_concept,
    subconcepts_of,
)
from .rdf import (
    BlankNode,
    Graph,
    Iri,
    Literal,
    Triple,
    expand,
    parse_turtle,
    serialize_turtle,
    term_text,
)
from .server import KnowledgeService, ServerConfig, make_server, serve
from .sparql import (
    BindingSet,
    Query,
    evaluate,
    parse_query,
    results_to_json,
    term_json,
)
from .store import RwLock, Store, TriplePattern, Variable
from .wrapper import (
    EvaluationSpec,
    InputSpec,
    ModelDescriptor,
    OutputSpec,
    StateSpec,
    WrapReport,
    camel_case,
    concept_stem,
    descriptor_from_dict,
    descriptor_to_dict,
    instance_sequence,
    parse_descriptor,
    unwrap,
    wrap,
)

__version__ = "0.1.0"

__all__ = [
    "AgriKMapError",
    "AmbiguousConceptError",
    "BindError",
    "BindingSet",
    "BlankNode",
    "Concept",
    "CyclicHierarchyError",
    "DuplicateModelError",
    "EvaluationSpec",
    "Graph",
    "InputSpec",
    "Instance",
    "InvalidRepresentationError",
    "Iri",
    "KnowledgeRepresentation",
    "KnowledgeService",
    "Literal",
    "LoadError",
    "ModelDescriptor",
    "OntologyIndex",
    "OntologyMetrics",
    "OutputSpec",
    "ParseIssue",
    "Query",
    "QuerySyntaxError",
    "Relation",
    "RelationKind",
    "RwLock",
    "SchemaError",
    "ServerConfig",
    "State",
    "StateSpec",
    "Store",
    "TaskKind",
    "Transformation",
    "Triple",
    "TriplePattern",
    "TurtleSyntaxError",
    "UnknownConceptError",
    "UnknownModelError",
    "UnknownPrefixError",
    "UnsupportedFeatureError",
    "Variable",
    "Violation",
    "WrapReport",
    "camel_case",
    "compute_metrics",
    "concept_stem",
    "descriptor_from_dict",
    "descriptor_to_dict",
    "evaluate",
    "expand",
    "instance_sequence",
    "load_ontology",
    "local_name",
    "make_server",
    "parse_descriptor",
    "parse_query",
    "parse_turtle",
    "resolve_concept",
    "results_to_json",
    "serialize_turtle",
    "serve",
    "subconcepts_of",
    "term_json",
    "term_text",
    "to_triples",
    "unwrap",
    "validate",
    "wrap",
]
