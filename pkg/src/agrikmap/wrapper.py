"""Materialize mined-model descriptors into the triple store, and recover them.

The wrapper is the write path of the knowledge map.  A JSON descriptor of a
mined model (task, algorithm, inputs, output, states, evaluation) is turned
into a typed knowledge representation, validated against the ontology, and
inserted into the store as triples — atomically, so a failed descriptor never
leaves partial data behind.  ``unwrap`` is the inverse: it reads a model's
subgraph back out of the store and reconstructs an equivalent descriptor.
"""

from __future__ import annotations

import json
import math
import re
from collections import Counter
from dataclasses import dataclass, field

from .errors import (
    AmbiguousConceptError,
    DuplicateModelError,
    InvalidRepresentationError,
    SchemaError,
    UnknownConceptError,
    UnknownModelError,
)
from .kmodel import (
    DATA_MINING_ALGORITHM,
    HAS_EVALUATION,
    METRIC_NAME,
    METRIC_VALUE,
    RELATION_PREDICATES,
    TASK_CLASSES,
    UNCLASSIFIED_CONCEPT,
    Concept,
    Instance,
    KnowledgeRepresentation,
    Relation,
    RelationKind,
    State,
    TaskKind,
    Transformation,
    to_triples,
    validate,
)
from .ontology import OntologyIndex, local_name, resolve_concept
from .rdf import Graph, Iri, Literal, Triple, serialize_turtle
from .store import Store, TriplePattern, Variable
from .vocab import (
    OWL_CLASS,
    RDF_TYPE,
    RDFS_LABEL,
    RDFS_SUBCLASSOF,
    agrikmap,
    agriont,
)

_MODEL_ID_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_-]*\Z")
_STEM_RE = re.compile(r"(.*[a-z])([A-Z]{2,}[0-9]*)\Z")
_SEQ_RE = re.compile(r"(.+)_([0-9]{3})\Z")

#: Transformation name that passes a value through unchanged.  Identity
#: inputs attach their instance directly to the model without minting a
#: transformation node.
IDENTITY = "identity"

_TASK_NAMES = {kind.value for kind in TaskKind}
_CLASS_BY_TASK = {Iri(iri): kind for kind, iri in TASK_CLASSES.items()}

_RDF_TYPE = Iri(RDF_TYPE)
_RDFS_LABEL = Iri(RDFS_LABEL)
_HAS_TRANSFORMATION = Iri(RELATION_PREDICATES[RelationKind.HAS_TRANSFORMATION])
_HAS_CONDITION = Iri(RELATION_PREDICATES[RelationKind.HAS_CONDITION])
_HAS_STATE = Iri(RELATION_PREDICATES[RelationKind.HAS_STATE])
_PREDICTS = Iri(RELATION_PREDICATES[RelationKind.PREDICTS])
_TRANSFORMATION_OF = Iri(RELATION_PREDICATES[RelationKind.TRANSFORMATION_OF])
_HAS_EVALUATION = Iri(HAS_EVALUATION)
_METRIC_NAME = Iri(METRIC_NAME)
_METRIC_VALUE = Iri(METRIC_VALUE)


# ---------------------------------------------------------------------------
# Descriptor schema
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InputSpec:
    """One model input: a concept and the transformation applied to it."""

    concept: str
    transformation: str
    unit: str | None = None
    range: tuple[float, float] | None = None


@dataclass(frozen=True)
class OutputSpec:
    """The predicted concept and the transformation applied to it."""

    concept: str
    transformation: str


@dataclass(frozen=True)
class StateSpec:
    """A discrete value some concept can take, e.g. a disease name."""

    concept: str
    value: str


@dataclass(frozen=True)
class EvaluationSpec:
    """A single quality metric reported for the model."""

    metric: str
    value: float


@dataclass(frozen=True)
class ModelDescriptor:
    """Validated description of one mined model, ready for materialization."""

    model_id: str
    task: TaskKind
    algorithm: str
    inputs: tuple[InputSpec, ...] = ()
    output: OutputSpec | None = None
    states: tuple[StateSpec, ...] = ()
    evaluation: EvaluationSpec | None = None
    source: str = ""


def _require(obj: dict, key: str, kind: type, where: str):
    if key not in obj:
        raise SchemaError(f"{where}{key}", "required field is missing")
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, kind):
        raise SchemaError(f"{where}{key}", f"expected {kind.__name__}")
    return value


def _optional_str(obj: dict, key: str, where: str) -> str | None:
    if key not in obj:
        return None
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, str):
        raise SchemaError(f"{where}{key}", "expected string")
    return value


def _check_fields(obj: dict, allowed: set[str], where: str) -> None:
    for key in obj:
        if key not in allowed:
            raise SchemaError(f"{where}{key}", "unknown field")


def _nonempty(value: str, name: str) -> str:
    if not value.strip():
        raise SchemaError(name, "must be a non-empty string")
    return value.strip()


def _parse_input(obj: object, where: str) -> InputSpec:
    if not isinstance(obj, dict):
        raise SchemaError(where.rstrip("."), "expected object")
    _check_fields(obj, {"concept", "transformation", "unit", "range"}, where)
    concept = _nonempty(_require(obj, "concept", str, where), f"{where}concept")
    transformation = _require(obj, "transformation", str, where)
    if not _NAME_RE.fullmatch(transformation):
        raise SchemaError(
            f"{where}transformation",
            "must match [A-Za-z][A-Za-z0-9_-]*",
        )
    unit = _optional_str(obj, "unit", where)
    if unit is not None:
        unit = _nonempty(unit, f"{where}unit")
    value_range: tuple[float, float] | None = None
    if "range" in obj:
        raw = obj["range"]
        ok = (
            isinstance(raw, list)
            and len(raw) == 2
            and all(
                isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)
                for v in raw
            )
        )
        if not ok:
            raise SchemaError(f"{where}range", "expected [number, number]")
        if raw[0] > raw[1]:
            raise SchemaError(f"{where}range", "minimum exceeds maximum")
        value_range = (float(raw[0]), float(raw[1]))
    return InputSpec(concept, transformation, unit, value_range)


def _parse_output(obj: object, where: str) -> OutputSpec:
    if not isinstance(obj, dict):
        raise SchemaError(where.rstrip("."), "expected object")
    _check_fields(obj, {"concept", "transformation"}, where)
    concept = _nonempty(_require(obj, "concept", str, where), f"{where}concept")
    transformation = _require(obj, "transformation", str, where)
    if not _NAME_RE.fullmatch(transformation):
        raise SchemaError(
            f"{where}transformation",
            "must match [A-Za-z][A-Za-z0-9_-]*",
        )
    return OutputSpec(concept, transformation)


def _parse_state(obj: object, where: str) -> StateSpec:
    if not isinstance(obj, dict):
        raise SchemaError(where.rstrip("."), "expected object")
    _check_fields(obj, {"concept", "value"}, where)
    concept = _nonempty(_require(obj, "concept", str, where), f"{where}concept")
    value = _nonempty(_require(obj, "value", str, where), f"{where}value")
    return StateSpec(concept, value)


def _parse_evaluation(obj: object, where: str) -> EvaluationSpec:
    if not isinstance(obj, dict):
        raise SchemaError(where.rstrip("."), "expected object")
    _check_fields(obj, {"metric", "value"}, where)
    metric = _nonempty(_require(obj, "metric", str, where), f"{where}metric")
    value = obj.get("value")
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{where}value", "expected number")
    if not math.isfinite(value):
        raise SchemaError(f"{where}value", "must be finite")
    return EvaluationSpec(metric, value)


def descriptor_from_dict(obj: object) -> ModelDescriptor:
    """Validate a decoded JSON object and build a :class:`ModelDescriptor`.

    Raises :class:`SchemaError` naming the offending field on the first
    violation found.
    """
    if not isinstance(obj, dict):
        raise SchemaError("$", "expected a JSON object")
    _check_fields(
        obj,
        {
            "model_id",
            "task",
            "algorithm",
            "inputs",
            "output",
            "states",
            "evaluation",
            "source",
        },
        "",
    )
    model_id = _require(obj, "model_id", str, "")
    if not _MODEL_ID_RE.fullmatch(model_id):
        raise SchemaError("model_id", "must match [A-Za-z][A-Za-z0-9_]*")
    task_name = _require(obj, "task", str, "")
    if task_name not in _TASK_NAMES:
        raise SchemaError("task", f"must be one of {sorted(_TASK_NAMES)}")
    task = TaskKind(task_name)
    algorithm = _nonempty(_require(obj, "algorithm", str, ""), "algorithm")

    raw_inputs = _require(obj, "inputs", list, "")
    if not raw_inputs:
        raise SchemaError("inputs", "at least one input is required")
    inputs = tuple(
        _parse_input(item, f"inputs[{i}].") for i, item in enumerate(raw_inputs)
    )

    output = None
    if obj.get("output") is not None:
        output = _parse_output(obj["output"], "output.")

    states: tuple[StateSpec, ...] = ()
    if "states" in obj:
        raw_states = obj["states"]
        if not isinstance(raw_states, list):
            raise SchemaError("states", "expected list")
        states = tuple(
            _parse_state(item, f"states[{i}].") for i, item in enumerate(raw_states)
        )

    evaluation = None
    if obj.get("evaluation") is not None:
        evaluation = _parse_evaluation(obj["evaluation"], "evaluation.")

    source = _optional_str(obj, "source", "") or ""

    if task in (TaskKind.REGRESSION, TaskKind.CLASSIFICATION) and output is None:
        raise SchemaError("output", f"required for {task.value} models")
    if task is TaskKind.ASSOCIATION_RULE and not states and output is None:
        raise SchemaError(
            "states", "association_rule models need states or an output"
        )

    return ModelDescriptor(
        model_id=model_id,
        task=task,
        algorithm=algorithm,
        inputs=inputs,
        output=output,
        states=states,
        evaluation=evaluation,
        source=source,
    )


def parse_descriptor(text: str) -> ModelDescriptor:
    """Parse a JSON model descriptor, raising :class:`SchemaError` on problems."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"invalid JSON: {exc}") from exc
    return descriptor_from_dict(obj)


def descriptor_to_dict(descriptor: ModelDescriptor) -> dict:
    """Serialize a descriptor back to its JSON object shape."""
    obj: dict = {
        "model_id": descriptor.model_id,
        "task": descriptor.task.value,
        "algorithm": descriptor.algorithm,
        "inputs": [],
    }
    for spec in descriptor.inputs:
        item: dict = {"concept": spec.concept, "transformation": spec.transformation}
        if spec.unit is not None:
            item["unit"] = spec.unit
        if spec.range is not None:
            item["range"] = list(spec.range)
        obj["inputs"].append(item)
    if descriptor.output is not None:
        obj["output"] = {
            "concept": descriptor.output.concept,
            "transformation": descriptor.output.transformation,
        }
    if descriptor.states:
        obj["states"] = [
            {"concept": s.concept, "value": s.value} for s in descriptor.states
        ]
    if descriptor.evaluation is not None:
        obj["evaluation"] = {
            "metric": descriptor.evaluation.metric,
            "value": descriptor.evaluation.value,
        }
    if descriptor.source:
        obj["source"] = descriptor.source
    return obj


# ---------------------------------------------------------------------------
# Naming rules
# ---------------------------------------------------------------------------


def concept_stem(local: str) -> str:
    """Instance-name stem of a concept's local name.

    A trailing run of two or more capitals (optionally followed by digits)
    after a lowercase letter is an abbreviation suffix and is dropped, so
    instances of ``SoilPH`` are named ``Soil_000``, ``Soil_001``, ... while
    ``CropYield`` and ``NDVI`` keep their full names.
    """
    match = _STEM_RE.fullmatch(local)
    return match.group(1) if match else local


def camel_case(text: str) -> str:
    """Collapse a free-form phrase to a CamelCase local name.

    Words keep any interior capitalization ("pH sensor" -> "PHSensor").
    """
    words = [w for w in re.split(r"[^0-9A-Za-z]+", text) if w]
    return "".join(w[0].upper() + w[1:] for w in words)


def instance_sequence(iri: str) -> int | None:
    """Sequence number of an instance IRI, or None if it has no suffix."""
    match = _SEQ_RE.fullmatch(local_name(iri))
    return int(match.group(2)) if match else None


# ---------------------------------------------------------------------------
# Wrap
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WrapReport:
    """What a wrap call did: the IRIs it minted or reused, and the triples added."""

    model: str
    task: str
    conditions: tuple[str, ...]
    output: str | None
    transformations: tuple[str, ...]
    states: tuple[str, ...]
    algorithm_node: str
    evaluation_node: str | None
    minted_classes: tuple[str, ...]
    triples_added: int
    turtle: str
    violations: tuple[str, ...] = ()

    def as_dict(self) -> dict:
        return {
            "model": self.model,
            "task": self.task,
            "conditions": list(self.conditions),
            "output": self.output,
            "transformations": list(self.transformations),
            "states": list(self.states),
            "algorithm_node": self.algorithm_node,
            "evaluation_node": self.evaluation_node,
            "minted_classes": list(self.minted_classes),
            "triples_added": self.triples_added,
            "violations": list(self.violations),
            "turtle": self.turtle,
        }


class _Allocator:
    """Hands out unused AgriKMap IRIs against a store snapshot.

    An IRI counts as taken when it already appears as a subject in the store
    or was handed out earlier in the same wrap.
    """

    def __init__(self, store: Store):
        self._store = store
        self._taken: set[str] = set()

    def _taken_p(self, iri: str) -> bool:
        if iri in self._taken:
            return True
        return self._store.count(TriplePattern(Iri(iri), Variable("p"), Variable("o"))) > 0

    def claim(self, iri: str) -> None:
        self._taken.add(iri)

    def instance(self, stem: str, prefer_zero: bool) -> Iri:
        if prefer_zero:
            candidate = agrikmap(f"{stem}_000")
            if not self._taken_p(candidate):
                self._taken.add(candidate)
                return Iri(candidate)
        n = 1
        while True:
            candidate = agrikmap(f"{stem}_{n:03d}")
            if not self._taken_p(candidate):
                self._taken.add(candidate)
                return Iri(candidate)
            n += 1

    def transformation(self, stem: str, name: str, concept: Iri) -> tuple[Iri, bool]:
        """Return (iri, reused).  Reuse an existing node for the same concept;
        dodge collisions with nodes of other concepts by suffixing."""
        base = agrikmap(f"{stem}_{name}")
        candidate = base
        k = 1
        while True:
            if (
                self._store.count(TriplePattern(Iri(candidate), _TRANSFORMATION_OF, concept))
                > 0
            ):
                return Iri(candidate), True
            if not self._taken_p(candidate):
                self._taken.add(candidate)
                return Iri(candidate), False
            k += 1
            candidate = f"{base}_{k}"


def _resolve_concepts(
    descriptor: ModelDescriptor, index: OntologyIndex, strict: bool
) -> tuple[dict[str, Iri], dict[str, str]]:
    """Resolve every concept name in the descriptor to a class IRI.

    Returns (name -> IRI, minted class IRI -> parent IRI).  In strict mode an
    unknown name raises; otherwise a new class is minted under the
    catch-all concept.
    """
    names: list[str] = []
    for spec in descriptor.inputs:
        names.append(spec.concept)
    if descriptor.output is not None:
        names.append(descriptor.output.concept)
    for state in descriptor.states:
        names.append(state.concept)

    resolved: dict[str, Iri] = {}
    minted: dict[str, str] = {}
    for name in names:
        if name in resolved:
            continue
        try:
            resolved[name] = resolve_concept(name, index)
        except AmbiguousConceptError:
            raise
        except UnknownConceptError:
            if strict:
                raise
            iri = agriont(camel_case(name))
            resolved[name] = Iri(iri)
            minted[iri] = UNCLASSIFIED_CONCEPT
    return resolved, minted


def _model_subjects(model_iri: Iri, store: Store) -> list[Iri]:
    """Subjects making up one model's subgraph: the model node itself plus
    every AgriKMap node it links to, the transformations of its instances,
    and the state values carrying labels."""
    subjects: dict[str, Iri] = {model_iri.value: model_iri}
    instances: list[Iri] = []
    for triple in store.match(TriplePattern(model_iri, Variable("p"), Variable("o"))):
        obj = triple.object
        if isinstance(obj, Iri) and obj.value not in subjects:
            if triple.predicate == _RDF_TYPE:
                continue
            subjects[obj.value] = obj
            if triple.predicate in (_HAS_CONDITION, _PREDICTS):
                instances.append(obj)
    for inst in instances:
        for triple in store.match(TriplePattern(inst, Variable("p"), Variable("o"))):
            obj = triple.object
            if isinstance(obj, Iri) and obj.value not in subjects:
                if triple.predicate == _RDF_TYPE:
                    continue
                subjects[obj.value] = obj
    return list(subjects.values())


def _model_graph(model_iri: Iri, store: Store) -> Graph:
    graph = Graph(prefixes=dict(store.prefixes))
    for subject in _model_subjects(model_iri, store):
        for triple in store.match(TriplePattern(subject, Variable("p"), Variable("o"))):
            graph.add(triple)
    return graph


def wrap(
    descriptor: ModelDescriptor,
    index: OntologyIndex,
    store: Store,
    strict: bool = True,
) -> WrapReport:
    """Materialize one model descriptor into the store.

    The call is atomic: concept resolution, IRI allocation, representation
    validation and triple construction all happen before anything is
    inserted, and the whole call holds the store's write lock so concurrent
    wraps cannot interleave their IRI allocations.

    Re-submitting a descriptor equivalent to one already in the store is a
    no-op returning a report with ``triples_added == 0``; a different
    descriptor under an existing model id raises :class:`DuplicateModelError`.
    """
    model_iri = Iri(agrikmap(descriptor.model_id))
    with store.write_lock():
        typed = store.count(TriplePattern(model_iri, _RDF_TYPE, Variable("t"))) > 0
        if typed:
            existing = unwrap(descriptor.model_id, store)
            if _equivalent(existing, descriptor, index, strict):
                return _existing_report(descriptor, model_iri, store)
            raise DuplicateModelError(descriptor.model_id)

        resolved, minted_classes = _resolve_concepts(descriptor, index, strict)
        working_index = index.extend(minted_classes) if minted_classes else index

        allocator = _Allocator(store)
        allocator.claim(model_iri.value)

        concepts: dict[str, Concept] = {
            iri.value: Concept(iri=iri) for iri in resolved.values()
        }

        def concept_of(name: str) -> Concept:
            return concepts[resolved[name].value]

        instances: list[Instance] = []
        transformations: dict[tuple[str, str], Transformation] = {}
        states: list[State] = []
        relations: list[Relation] = []
        transformation_order: list[str] = []

        def transformation_for(
            concept: Concept, name: str, value_range: tuple[float, float] | None
        ) -> Transformation:
            key = (concept.iri.value, name)
            if key in transformations:
                return transformations[key]
            stem = concept_stem(local_name(concept.iri.value))
            iri, reused = allocator.transformation(stem, name, concept.iri)
            node = Transformation(
                iri=iri,
                name=name,
                domain=concept,
                source_range=value_range,
            )
            transformations[key] = node
            transformation_order.append(iri.value)
            if not reused:
                relations.append(Relation(node, RelationKind.TRANSFORMATION_OF, concept))
            return node

        task_concept = Concept(iri=Iri(TASK_CLASSES[descriptor.task]))
        model_instance = Instance(iri=model_iri, concept=task_concept)
        instances.append(model_instance)
        relations.append(Relation(model_instance, RelationKind.IS_A, task_concept))

        output_instance: Instance | None = None
        if descriptor.output is not None:
            concept = concept_of(descriptor.output.concept)
            output_instance = Instance(
                iri=allocator.instance(concept_stem(local_name(concept.iri.value)), True),
                concept=concept,
            )
            instances.append(output_instance)
            relations.append(Relation(output_instance, RelationKind.IS_A, concept))
            relations.append(
                Relation(model_instance, RelationKind.PREDICTS, output_instance)
            )
            if descriptor.output.transformation != IDENTITY:
                node = transformation_for(concept, descriptor.output.transformation, None)
                relations.append(
                    Relation(output_instance, RelationKind.HAS_TRANSFORMATION, node)
                )

        condition_instances: list[Instance] = []
        for spec in descriptor.inputs:
            concept = concept_of(spec.concept)
            inst = Instance(
                iri=allocator.instance(concept_stem(local_name(concept.iri.value)), False),
                concept=concept,
            )
            instances.append(inst)
            condition_instances.append(inst)
            relations.append(Relation(inst, RelationKind.IS_A, concept))
            relations.append(Relation(model_instance, RelationKind.HAS_CONDITION, inst))
            if spec.transformation != IDENTITY:
                node = transformation_for(concept, spec.transformation, spec.range)
                relations.append(Relation(inst, RelationKind.HAS_TRANSFORMATION, node))

        state_nodes: list[str] = []
        for spec in descriptor.states:
            concept = concept_of(spec.concept)
            carrier: Instance | None = None
            if output_instance is not None and output_instance.concept == concept:
                carrier = output_instance
            else:
                for inst in condition_instances:
                    if inst.concept == concept:
                        carrier = inst
                        break
            if carrier is None:
                carrier = Instance(
                    iri=allocator.instance(
                        concept_stem(local_name(concept.iri.value)), False
                    ),
                    concept=concept,
                )
                instances.append(carrier)
                condition_instances.append(carrier)
                relations.append(Relation(carrier, RelationKind.IS_A, concept))
                relations.append(
                    Relation(model_instance, RelationKind.HAS_CONDITION, carrier)
                )
            value_iri = Iri(agriont(camel_case(spec.value)))
            state = State(
                iri=value_iri,
                of_instance=carrier,
                value=value_iri,
                label=spec.value,
            )
            states.append(state)
            state_nodes.append(value_iri.value)
            relations.append(Relation(carrier, RelationKind.HAS_STATE, state))

        algorithm_iri = Iri(agrikmap(f"{descriptor.model_id}_alg"))
        allocator.claim(algorithm_iri.value)
        algorithm_concept = Concept(iri=Iri(DATA_MINING_ALGORITHM))
        algorithm_node = Transformation(
            iri=algorithm_iri,
            name=descriptor.algorithm,
            domain=algorithm_concept,
            label=descriptor.algorithm,
        )
        relations.append(Relation(algorithm_node, RelationKind.IS_A, algorithm_concept))
        relations.append(
            Relation(model_instance, RelationKind.HAS_TRANSFORMATION, algorithm_node)
        )

        evaluation = None
        evaluation_node = None
        if descriptor.evaluation is not None:
            evaluation = (descriptor.evaluation.metric, descriptor.evaluation.value)
            evaluation_node = agrikmap(f"{descriptor.model_id}_eval")

        rep = KnowledgeRepresentation(
            id=model_iri,
            task=descriptor.task,
            instances=tuple(instances),
            transformations=tuple(transformations.values()) + (algorithm_node,),
            states=tuple(states),
            relations=tuple(relations),
            provenance=descriptor.source,
            evaluation=evaluation,
        )

        violations = validate(rep, working_index)
        if violations:
            raise InvalidRepresentationError(violations)

        graph = to_triples(rep, prefixes=dict(store.prefixes))
        for cls, parent in sorted(minted_classes.items()):
            graph.add(Triple(Iri(cls), _RDF_TYPE, Iri(OWL_CLASS)))
            graph.add(Triple(Iri(cls), Iri(RDFS_SUBCLASSOF), Iri(parent)))

        added = store.insert_graph(graph)

        return WrapReport(
            model=model_iri.value,
            task=descriptor.task.value,
            conditions=tuple(inst.iri.value for inst in condition_instances),
            output=output_instance.iri.value if output_instance else None,
            transformations=tuple(transformation_order),
            states=tuple(state_nodes),
            algorithm_node=algorithm_iri.value,
            evaluation_node=evaluation_node,
            minted_classes=tuple(sorted(minted_classes)),
            triples_added=added,
            turtle=serialize_turtle(_model_graph(model_iri, store)),
        )


def _existing_report(
    descriptor: ModelDescriptor, model_iri: Iri, store: Store
) -> WrapReport:
    """Report for an idempotent re-submission: recover the IRIs already minted."""
    conditions = sorted(
        (
            t.object.value
            for t in store.match(TriplePattern(model_iri, _HAS_CONDITION, Variable("o")))
            if isinstance(t.object, Iri)
        ),
        key=lambda iri: (instance_sequence(iri) is None, instance_sequence(iri) or 0, iri),
    )
    output = None
    for t in store.match(TriplePattern(model_iri, _PREDICTS, Variable("o"))):
        if isinstance(t.object, Iri):
            output = t.object.value
            break
    transformation_nodes: list[str] = []
    seen: set[str] = set()
    instance_iris = ([] if output is None else [output]) + conditions
    for iri in instance_iris:
        for t in store.match(TriplePattern(Iri(iri), _HAS_TRANSFORMATION, Variable("o"))):
            if isinstance(t.object, Iri) and t.object.value not in seen:
                seen.add(t.object.value)
                transformation_nodes.append(t.object.value)
    states: list[str] = []
    for iri in instance_iris:
        for t in store.match(TriplePattern(Iri(iri), _HAS_STATE, Variable("o"))):
            if isinstance(t.object, Iri) and t.object.value not in states:
                states.append(t.object.value)
    evaluation_node = None
    for t in store.match(TriplePattern(model_iri, _HAS_EVALUATION, Variable("o"))):
        if isinstance(t.object, Iri):
            evaluation_node = t.object.value
            break
    return WrapReport(
        model=model_iri.value,
        task=descriptor.task.value,
        conditions=tuple(conditions),
        output=output,
        transformations=tuple(transformation_nodes),
        states=tuple(states),
        algorithm_node=agrikmap(f"{descriptor.model_id}_alg"),
        evaluation_node=evaluation_node,
        minted_classes=(),
        triples_added=0,
        turtle=serialize_turtle(_model_graph(model_iri, store)),
    )


# ---------------------------------------------------------------------------
# Unwrap
# ---------------------------------------------------------------------------


def _first_object(store: Store, subject: Iri, predicate: Iri):
    for triple in store.match(TriplePattern(subject, predicate, Variable("o"))):
        return triple.object
    return None


def _label_of(store: Store, subject: Iri) -> str | None:
    value = _first_object(store, subject, _RDFS_LABEL)
    if isinstance(value, Literal):
        return value.lexical
    return None


def _transformation_name(transformation_iri: Iri, concept: Iri) -> str:
    local = local_name(transformation_iri.value)
    stem = concept_stem(local_name(concept.value))
    prefix = f"{stem}_"
    if local.startswith(prefix) and len(local) > len(prefix):
        return local[len(prefix):]
    return local


def unwrap(model_id: str, store: Store) -> ModelDescriptor:
    """Reconstruct a descriptor from a model's subgraph in the store.

    Units, value ranges and the free-text source are not stored as triples,
    so the recovered descriptor omits them; everything else round-trips.
    Raises :class:`UnknownModelError` if the model id is absent or is not
    typed as one of the mining task classes.
    """
    model_iri = Iri(agrikmap(model_id))
    with store.read_lock():
        task: TaskKind | None = None
        for triple in store.match(TriplePattern(model_iri, _RDF_TYPE, Variable("t"))):
            if isinstance(triple.object, Iri) and triple.object in _CLASS_BY_TASK:
                task = _CLASS_BY_TASK[triple.object]
                break
        if task is None:
            raise UnknownModelError(model_id)

        algorithm = ""
        for triple in store.match(
            TriplePattern(model_iri, _HAS_TRANSFORMATION, Variable("o"))
        ):
            node = triple.object
            if not isinstance(node, Iri):
                continue
            typed = {
                t.object
                for t in store.match(TriplePattern(node, _RDF_TYPE, Variable("t")))
            }
            if Iri(DATA_MINING_ALGORITHM) in typed:
                algorithm = _label_of(store, node) or local_name(node.value)
                break

        def instance_concept(inst: Iri) -> Iri | None:
            value = _first_object(store, inst, _RDF_TYPE)
            return value if isinstance(value, Iri) else None

        def instance_inputs(inst: Iri) -> InputSpec:
            concept = instance_concept(inst)
            concept_name = local_name(concept.value) if concept else local_name(inst.value)
            name = IDENTITY
            for t in store.match(TriplePattern(inst, _HAS_TRANSFORMATION, Variable("o"))):
                if isinstance(t.object, Iri) and concept is not None:
                    name = _transformation_name(t.object, concept)
                    break
            return InputSpec(concept=concept_name, transformation=name)

        condition_iris = sorted(
            (
                t.object
                for t in store.match(
                    TriplePattern(model_iri, _HAS_CONDITION, Variable("o"))
                )
                if isinstance(t.object, Iri)
            ),
            key=lambda iri: (
                instance_sequence(iri.value) is None,
                instance_sequence(iri.value) or 0,
                iri.value,
            ),
        )
        inputs = tuple(instance_inputs(iri) for iri in condition_iris)

        output = None
        output_iri = _first_object(store, model_iri, _PREDICTS)
        if isinstance(output_iri, Iri):
            spec = instance_inputs(output_iri)
            output = OutputSpec(concept=spec.concept, transformation=spec.transformation)

        states: list[StateSpec] = []
        carrier_iris = ([output_iri] if isinstance(output_iri, Iri) else []) + list(
            condition_iris
        )
        for carrier in carrier_iris:
            concept = instance_concept(carrier)
            concept_name = (
                local_name(concept.value) if concept else local_name(carrier.value)
            )
            for t in store.match(TriplePattern(carrier, _HAS_STATE, Variable("o"))):
                if isinstance(t.object, Iri):
                    value = _label_of(store, t.object) or local_name(t.object.value)
                    states.append(StateSpec(concept=concept_name, value=value))

        evaluation = None
        eval_iri = _first_object(store, model_iri, _HAS_EVALUATION)
        if isinstance(eval_iri, Iri):
            metric = _first_object(store, eval_iri, _METRIC_NAME)
            value = _first_object(store, eval_iri, _METRIC_VALUE)
            if isinstance(metric, Literal) and isinstance(value, Literal):
                try:
                    evaluation = EvaluationSpec(metric.lexical, float(value.lexical))
                except ValueError:
                    evaluation = None

    return ModelDescriptor(
        model_id=model_id,
        task=task,
        algorithm=algorithm,
        inputs=inputs,
        output=output,
        states=tuple(states),
        evaluation=evaluation,
        source="",
    )


# ---------------------------------------------------------------------------
# Equivalence (duplicate detection)
# ---------------------------------------------------------------------------


def _concept_key(name: str, index: OntologyIndex, strict: bool) -> str:
    try:
        return resolve_concept(name, index).value
    except (UnknownConceptError, AmbiguousConceptError):
        if strict:
            raise
        return agriont(camel_case(name))


def _equivalent(
    stored: ModelDescriptor,
    incoming: ModelDescriptor,
    index: OntologyIndex,
    strict: bool,
) -> bool:
    """Do two descriptors describe the same model?  Ignores units, ranges,
    source text and ordering; compares concepts after resolution."""
    if stored.task != incoming.task or stored.algorithm != incoming.algorithm:
        return False

    def key(name: str) -> str:
        return _concept_key(name, index, strict)

    try:
        stored_inputs = Counter((key(i.concept), i.transformation) for i in stored.inputs)
        incoming_inputs = Counter(
            (key(i.concept), i.transformation) for i in incoming.inputs
        )
        if stored_inputs != incoming_inputs:
            return False
        stored_output = (
            (key(stored.output.concept), stored.output.transformation)
            if stored.output
            else None
        )
        incoming_output = (
            (key(incoming.output.concept), incoming.output.transformation)
            if incoming.output
            else None
        )
        if stored_output != incoming_output:
            return False
        stored_states = Counter((key(s.concept), s.value) for s in stored.states)
        incoming_states = Counter((key(s.concept), s.value) for s in incoming.states)
        if stored_states != incoming_states:
            return False
    except (UnknownConceptError, AmbiguousConceptError):
        return False

    if (stored.evaluation is None) != (incoming.evaluation is None):
        return False
    if stored.evaluation is not None and incoming.evaluation is not None:
        if stored.evaluation.metric != incoming.evaluation.metric:
            return False
        if not math.isclose(
            stored.evaluation.value, incoming.evaluation.value, rel_tol=1e-9, abs_tol=1e-12
        ):
            return False
    return True
