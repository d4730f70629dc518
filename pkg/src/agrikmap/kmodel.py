"""Typed knowledge representations for mined models.

A KnowledgeRepresentation bundles the instances, transformations, states and
relations that describe one mined model over the domain ontology. validate()
reports structural problems as data instead of raising, so callers can decide
what is fatal; to_triples() materializes a validated representation into the
closed predicate vocabulary.
"""

from __future__ import annotations

from decimal import Decimal
from enum import Enum
from dataclasses import dataclass, field
from typing import Union

from .errors import InvalidRepresentationError
from .ontology import OntologyIndex
from .rdf import Graph, Iri, Literal, Triple
from .vocab import (
    AGRIONT_NS,
    DEFAULT_PREFIXES,
    RDF_TYPE,
    RDFS_LABEL,
    XSD_DECIMAL,
    XSD_INTEGER,
    agriont,
)


class TaskKind(str, Enum):
    CLUSTERING = "clustering"
    CLASSIFICATION = "classification"
    REGRESSION = "regression"
    ASSOCIATION_RULE = "association_rule"


class RelationKind(str, Enum):
    IS_A = "isA"
    HAS_TRANSFORMATION = "hasTransformation"
    HAS_STATE = "hasState"
    HAS_CONDITION = "hasCondition"
    PREDICTS = "predicts"
    TRANSFORMATION_OF = "transformationOf"


# The closed predicate vocabulary. isA rides on rdf:type rather than a
# bespoke predicate so stock RDF tooling understands the typing.
RELATION_PREDICATES: dict[RelationKind, str] = {
    RelationKind.IS_A: RDF_TYPE,
    RelationKind.HAS_TRANSFORMATION: agriont("hasTransformation"),
    RelationKind.HAS_STATE: agriont("hasState"),
    RelationKind.HAS_CONDITION: agriont("hasCondition"),
    RelationKind.PREDICTS: agriont("predicts"),
    RelationKind.TRANSFORMATION_OF: agriont("transformationOf"),
}

HAS_EVALUATION = agriont("hasEvaluation")
METRIC_NAME = agriont("metricName")
METRIC_VALUE = agriont("metricValue")

# Task kind -> ontology class the model instance is typed with.
TASK_CLASSES: dict[TaskKind, str] = {
    TaskKind.CLUSTERING: agriont("Clustering"),
    TaskKind.CLASSIFICATION: agriont("Classification"),
    TaskKind.REGRESSION: agriont("Regression"),
    TaskKind.ASSOCIATION_RULE: agriont("AssociationRule"),
}

DATA_MINING_ALGORITHM = agriont("DataMiningAlgorithm")
UNCLASSIFIED_CONCEPT = agriont("UnclassifiedConcept")


@dataclass(frozen=True)
class Concept:
    """An ontology class reference. parent chains must stay acyclic."""

    iri: Iri
    label: str = ""
    parent: "Concept | None" = None


@dataclass(frozen=True)
class Transformation:
    """A derivation applied to a concept (min, max, avg, or an algorithm).

    source/target ranges are optional numeric intervals or categorical label
    sets. label, when set, is materialized as rdfs:label.
    """

    iri: Iri
    name: str
    domain: Concept
    source_range: tuple[float, float] | frozenset[str] | None = None
    target_range: tuple[float, float] | frozenset[str] | None = None
    label: str | None = None


@dataclass(frozen=True)
class Instance:
    """A concrete node typed by a concept, optionally transformed."""

    iri: Iri
    concept: Concept
    transformation: Transformation | None = None


@dataclass(frozen=True)
class State:
    """A discrete or numeric value attached to an instance.

    value is an IRI for categorical states, a Literal for numeric ones.
    label carries the raw descriptor text for categorical values.
    """

    iri: Iri
    of_instance: Instance
    value: Union[Iri, Literal]
    label: str | None = None


Element = Union[Concept, Instance, Transformation, State]


@dataclass(frozen=True)
class Relation:
    """One edge of the closed relation vocabulary between two elements."""

    subject: Element
    kind: RelationKind
    object: Element


@dataclass(frozen=True)
class KnowledgeRepresentation:
    """One mined model: its id, task, and the (I, T, S, R) element sets."""

    id: Iri
    task: TaskKind
    instances: tuple[Instance, ...] = ()
    transformations: tuple[Transformation, ...] = ()
    states: tuple[State, ...] = ()
    relations: tuple[Relation, ...] = ()
    provenance: str = ""
    evaluation: tuple[str, float] | None = None


@dataclass(frozen=True)
class Violation:
    """A single validation failure; rule is a stable machine-readable name."""

    rule: str
    subject: str
    detail: str = ""

    def __str__(self) -> str:
        tail = f" ({self.detail})" if self.detail else ""
        return f"{self.rule}: {self.subject}{tail}"


def _endpoint_term(element: Element, as_subject: bool = False) -> Iri | Literal:
    # A categorical state contributes its value IRI as a relation object;
    # subjects always use the element's own IRI since literals cannot be
    # subjects.
    if isinstance(element, State) and not as_subject:
        return element.value
    return element.iri


def _concept_chain_cyclic(concept: Concept) -> bool:
    seen: set[str] = set()
    node: Concept | None = concept
    while node is not None:
        if node.iri.value in seen:
            return True
        seen.add(node.iri.value)
        node = node.parent
    return False


def _range_bad(rng) -> bool:
    return (
        isinstance(rng, tuple)
        and len(rng) == 2
        and all(isinstance(v, (int, float)) for v in rng)
        and rng[0] > rng[1]
    )


def _structural_violations(rep: KnowledgeRepresentation) -> list[Violation]:
    out: list[Violation] = []
    if not rep.instances:
        out.append(Violation("EmptyRepresentation", rep.id.value, "no instances"))
        return out

    instance_iris = {i.iri.value for i in rep.instances}
    if rep.id.value not in instance_iris:
        out.append(Violation("MissingModelInstance", rep.id.value))

    member_iris = set(instance_iris)
    member_iris.update(t.iri.value for t in rep.transformations)
    member_iris.update(s.iri.value for s in rep.states)

    seen: dict[str, Element] = {}
    for element in (*rep.instances, *rep.transformations):
        if element.iri.value in seen and seen[element.iri.value] != element:
            out.append(Violation("DuplicateIri", element.iri.value))
        seen[element.iri.value] = element

    for t in rep.transformations:
        if not t.name:
            out.append(Violation("EmptyTransformationName", t.iri.value))
        for rng in (t.source_range, t.target_range):
            if _range_bad(rng):
                out.append(Violation("BadRange", t.iri.value, f"{rng[0]} > {rng[1]}"))

    for s in rep.states:
        if s.of_instance.iri.value not in instance_iris:
            out.append(Violation("DanglingStateInstance", s.iri.value, s.of_instance.iri.value))

    predicts = sum(r.kind is RelationKind.PREDICTS for r in rep.relations)
    if rep.task in (TaskKind.REGRESSION, TaskKind.CLASSIFICATION):
        if predicts == 0:
            out.append(Violation("MissingPredicts", rep.id.value, rep.task.value))
        elif predicts > 1:
            out.append(Violation("DuplicatePredicts", rep.id.value, f"{predicts} predicts relations"))

    for rel in rep.relations:
        for element in (rel.subject, rel.object):
            if isinstance(element, Concept):
                continue  # checked against the ontology separately
            if element.iri.value not in member_iris:
                out.append(
                    Violation("DanglingRelationEndpoint", element.iri.value, rel.kind.value)
                )
    return out


def validate(rep: KnowledgeRepresentation, index: OntologyIndex) -> list[Violation]:
    """All violations in the representation; empty means materializable."""
    out = _structural_violations(rep)

    concepts: dict[str, Concept] = {}
    for inst in rep.instances:
        concepts[inst.concept.iri.value] = inst.concept
    for t in rep.transformations:
        concepts[t.domain.iri.value] = t.domain
    for rel in rep.relations:
        for element in (rel.subject, rel.object):
            if isinstance(element, Concept):
                concepts[element.iri.value] = element

    for iri, concept in sorted(concepts.items()):
        if _concept_chain_cyclic(concept):
            out.append(Violation("CyclicConceptChain", iri))
        if not index.is_class(iri):
            out.append(Violation("UnknownConcept", iri))
    return out


def _decimal_literal(value: float | int) -> Literal:
    if isinstance(value, int):
        return Literal(str(value), XSD_INTEGER)
    return Literal(format(Decimal(repr(value)), "f"), XSD_DECIMAL)


def to_triples(rep: KnowledgeRepresentation, prefixes: dict[str, str] | None = None) -> Graph:
    """Materialize a representation into its closed-vocabulary triples.

    Pure function of the representation: each relation becomes exactly one
    triple, labelled transformations and categorical states contribute
    rdfs:label annotations, and an evaluation becomes a three-triple block
    hanging off <model>_eval. Raises InvalidRepresentationError when the
    representation is structurally unusable.
    """
    structural = _structural_violations(rep)
    if structural:
        raise InvalidRepresentationError(structural)

    graph = Graph(prefixes=dict(DEFAULT_PREFIXES if prefixes is None else prefixes))
    for rel in rep.relations:
        graph.add(
            Triple(
                _endpoint_term(rel.subject, as_subject=True),
                Iri(RELATION_PREDICATES[rel.kind]),
                _endpoint_term(rel.object),
            )
        )
    for t in rep.transformations:
        if t.label is not None:
            graph.add(Triple(t.iri, Iri(RDFS_LABEL), Literal(t.label)))
    for s in rep.states:
        if s.label is not None and isinstance(s.value, Iri):
            graph.add(Triple(s.value, Iri(RDFS_LABEL), Literal(s.label)))
    if rep.evaluation is not None:
        metric, value = rep.evaluation
        eval_iri = Iri(rep.id.value + "_eval")
        graph.add(Triple(rep.id, Iri(HAS_EVALUATION), eval_iri))
        graph.add(Triple(eval_iri, Iri(METRIC_NAME), Literal(metric)))
        graph.add(Triple(eval_iri, Iri(METRIC_VALUE), _decimal_literal(value)))
    return graph
