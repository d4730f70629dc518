"""Accessors for the data bundled with the package.

The package ships a compact agriculture ontology, five model descriptors
(two worked examples plus three synthetic models), and the four showcase
queries.  Descriptor order matters: instance sequence numbers depend on what
is already in the store, so ingesting in :data:`DESCRIPTOR_NAMES` order
reproduces the documented IRIs exactly.
"""

from __future__ import annotations

import importlib.resources

from .rdf import Graph, parse_turtle
from .wrapper import ModelDescriptor, parse_descriptor

DESCRIPTOR_NAMES: tuple[str, ...] = (
    "regressor_004",
    "classifier_016",
    "regressor_021",
    "rule_009",
    "cluster_007",
)

QUERY_NAMES: tuple[str, ...] = (
    "q1_model_expansion",
    "q2_soil_ph_transformations",
    "q3_crop_yield_models",
    "q4_sheath_rot_models",
)


def _data_root():
    return importlib.resources.files("agrikmap") / "data"


def ontology_path() -> str:
    """Filesystem path of the bundled ontology (for CLI defaults)."""
    return str(_data_root() / "core-ontology.ttl")


def ontology_text() -> str:
    return (_data_root() / "core-ontology.ttl").read_text(encoding="utf-8")


def ontology_graph() -> Graph:
    return parse_turtle(ontology_text())


def descriptor_text(name: str) -> str:
    return (_data_root() / "descriptors" / f"{name}.json").read_text(encoding="utf-8")


def descriptor(name: str) -> ModelDescriptor:
    return parse_descriptor(descriptor_text(name))


def descriptors() -> list[tuple[str, ModelDescriptor]]:
    """All bundled descriptors in canonical ingestion order."""
    return [(name, descriptor(name)) for name in DESCRIPTOR_NAMES]


def query_text(name: str) -> str:
    return (_data_root() / "queries" / f"{name}.rq").read_text(encoding="utf-8")


def queries() -> list[tuple[str, str]]:
    """All bundled queries as (name, text), in presentation order."""
    return [(name, query_text(name)) for name in QUERY_NAMES]
