"""Ontology loading: entity id sets, subclass closure, name resolution, metrics.

An OntologyIndex is built once from a parsed graph and treated as immutable
afterwards; the wrapper's lenient mode derives extended copies instead of
mutating. Classes, object properties, data properties and individuals are
kept pairwise disjoint, with earlier kinds taking precedence when a subject
is declared as several.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import AmbiguousConceptError, CyclicHierarchyError, UnknownConceptError
from .rdf import Graph, Iri, Literal
from .vocab import (
    OWL_CLASS,
    OWL_DATATYPE_PROPERTY,
    OWL_NAMED_INDIVIDUAL,
    OWL_OBJECT_PROPERTY,
    RDF_TYPE,
    RDFS_COMMENT,
    RDFS_LABEL,
    RDFS_SUBCLASSOF,
)

_ENTITY_KINDS = (OWL_CLASS, OWL_OBJECT_PROPERTY, OWL_DATATYPE_PROPERTY, OWL_NAMED_INDIVIDUAL)


def local_name(iri: str) -> str:
    """Fragment after the last '#', '/' or ':' separator."""
    cut = max(iri.rfind("#"), iri.rfind("/"), iri.rfind(":"))
    return iri[cut + 1 :]


@dataclass(frozen=True)
class OntologyMetrics:
    """Protege-style counts over a loaded ontology."""

    axioms: int
    logical_axioms: int
    declaration_axioms: int
    classes: int
    object_properties: int
    data_properties: int
    individuals: int

    def as_dict(self) -> dict[str, int]:
        return {
            "axioms": self.axioms,
            "logical_axioms": self.logical_axioms,
            "declaration_axioms": self.declaration_axioms,
            "classes": self.classes,
            "object_properties": self.object_properties,
            "data_properties": self.data_properties,
            "individuals": self.individuals,
        }


@dataclass(frozen=True)
class OntologyIndex:
    """Entity id sets plus the transitive subclass closure and name indexes."""

    classes: frozenset[str]
    object_properties: frozenset[str]
    data_properties: frozenset[str]
    individuals: frozenset[str]
    ancestors: dict[str, frozenset[str]]  # class iri -> strict superclasses
    local_index: dict[str, frozenset[str]]  # lowercase local name -> class iris
    label_index: dict[str, frozenset[str]]  # lowercase rdfs:label -> class iris
    triple_count: int
    non_declaration_count: int = 0
    annotation_count: int = 0
    extra_parents: dict[str, str] = field(default_factory=dict)

    def is_class(self, iri: str) -> bool:
        return iri in self.classes

    def extend(self, minted: dict[str, str]) -> "OntologyIndex":
        """A copy with extra classes minted under given parent classes."""
        if not minted:
            return self
        classes = set(self.classes)
        ancestors = dict(self.ancestors)
        local_index = {k: set(v) for k, v in self.local_index.items()}
        for iri, parent in minted.items():
            classes.add(iri)
            ancestors[iri] = frozenset({parent}) | self.ancestors.get(parent, frozenset())
            local_index.setdefault(local_name(iri).lower(), set()).add(iri)
        return OntologyIndex(
            classes=frozenset(classes),
            object_properties=self.object_properties,
            data_properties=self.data_properties,
            individuals=self.individuals,
            ancestors=ancestors,
            local_index={k: frozenset(v) for k, v in local_index.items()},
            label_index=self.label_index,
            triple_count=self.triple_count,
            non_declaration_count=self.non_declaration_count,
            annotation_count=self.annotation_count,
            extra_parents={**self.extra_parents, **minted},
        )


def _transitive_closure(parents: dict[str, set[str]]) -> dict[str, frozenset[str]]:
    """Ancestors per node; raises CyclicHierarchyError on any cycle."""
    closure: dict[str, frozenset[str]] = {}
    visiting: set[str] = set()

    def walk(node: str) -> frozenset[str]:
        if node in closure:
            return closure[node]
        if node in visiting:
            raise CyclicHierarchyError(node)
        visiting.add(node)
        out: set[str] = set()
        for parent in parents.get(node, ()):
            out.add(parent)
            out |= walk(parent)
        visiting.discard(node)
        result = frozenset(out)
        closure[node] = result
        if node in result:
            raise CyclicHierarchyError(node)
        return result

    for node in list(parents):
        walk(node)
    return closure


def load_ontology(graph: Graph) -> OntologyIndex:
    """Index a parsed ontology graph.

    Entity kinds follow the usual OWL declarations; subjects typed by an
    already-declared class count as individuals even without an explicit
    owl:NamedIndividual declaration.
    """
    classes: set[str] = set()
    object_properties: set[str] = set()
    data_properties: set[str] = set()
    individuals: set[str] = set()
    parents: dict[str, set[str]] = {}
    labels: dict[str, list[str]] = {}
    typed_by: list[tuple[str, str]] = []

    for t in graph:
        if not isinstance(t.subject, Iri):
            continue
        s = t.subject.value
        p = t.predicate.value
        if p == RDF_TYPE and isinstance(t.object, Iri):
            o = t.object.value
            if o == OWL_CLASS:
                classes.add(s)
            elif o == OWL_OBJECT_PROPERTY:
                object_properties.add(s)
            elif o == OWL_DATATYPE_PROPERTY:
                data_properties.add(s)
            elif o == OWL_NAMED_INDIVIDUAL:
                individuals.add(s)
            else:
                typed_by.append((s, o))
        elif p == RDFS_SUBCLASSOF and isinstance(t.object, Iri):
            parents.setdefault(s, set()).add(t.object.value)
        elif p == RDFS_LABEL and isinstance(t.object, Literal):
            labels.setdefault(s, []).append(t.object.lexical)

    for s, o in typed_by:
        if o in classes:
            individuals.add(s)

    # Keep the four id sets pairwise disjoint; class beats property beats
    # individual when a subject is declared as more than one kind.
    object_properties -= classes
    data_properties -= classes | object_properties
    individuals -= classes | object_properties | data_properties

    ancestors = _transitive_closure(parents)
    for c in classes:
        ancestors.setdefault(c, frozenset())

    local_index: dict[str, set[str]] = {}
    label_index: dict[str, set[str]] = {}
    for c in classes:
        local_index.setdefault(local_name(c).lower(), set()).add(c)
        for text in labels.get(c, ()):
            label_index.setdefault(text.strip().lower(), set()).add(c)

    non_declaration = 0
    annotations = 0
    for t in graph:
        p = t.predicate.value
        if p == RDF_TYPE and isinstance(t.object, Iri) and t.object.value in _ENTITY_KINDS:
            continue
        if p in (RDFS_LABEL, RDFS_COMMENT):
            annotations += 1
            continue
        non_declaration += 1

    return OntologyIndex(
        classes=frozenset(classes),
        object_properties=frozenset(object_properties),
        data_properties=frozenset(data_properties),
        individuals=frozenset(individuals),
        ancestors=ancestors,
        local_index={k: frozenset(v) for k, v in local_index.items()},
        label_index={k: frozenset(v) for k, v in label_index.items()},
        triple_count=len(graph),
        non_declaration_count=non_declaration,
        annotation_count=annotations,
    )


def resolve_concept(name: str, index: OntologyIndex) -> Iri:
    """Resolve a concept name to its class IRI.

    Lookup is case-insensitive, first over class local names and then over
    rdfs:label values. Exactly one candidate must remain.
    """
    key = name.strip().lower()
    if not key:
        raise UnknownConceptError(name)
    for table in (index.local_index, index.label_index):
        candidates = table.get(key, frozenset())
        if len(candidates) == 1:
            return Iri(next(iter(candidates)))
        if len(candidates) > 1:
            raise AmbiguousConceptError(name, tuple(sorted(candidates)))
    raise UnknownConceptError(name)


def subconcepts_of(iri: str | Iri, index: OntologyIndex) -> frozenset[str]:
    """Strict descendants of a class under the transitive subclass closure."""
    value = iri.value if isinstance(iri, Iri) else iri
    if value not in index.classes:
        raise UnknownConceptError(value)
    return frozenset(c for c, above in index.ancestors.items() if value in above and c in index.classes)


def compute_metrics(index: OntologyIndex) -> OntologyMetrics:
    """Counts over the loaded graph.

    Axioms are all triples. Declaration axioms are the entity ids across the
    four kind sets. Logical axioms are the triples that neither declare one
    of the four entity kinds nor annotate with rdfs:label/rdfs:comment, so
    subclass edges, domains/ranges and class assertions all count.
    """
    return OntologyMetrics(
        axioms=index.triple_count,
        logical_axioms=index.non_declaration_count,
        declaration_axioms=len(index.classes)
        + len(index.object_properties)
        + len(index.data_properties)
        + len(index.individuals),
        classes=len(index.classes),
        object_properties=len(index.object_properties),
        data_properties=len(index.data_properties),
        individuals=len(index.individuals),
    )
