"""Namespace constants shared across the package.

The AgriOnt namespace holds domain vocabulary (classes, properties, state
individuals); AgriKMap holds everything minted for ingested models.
"""

from __future__ import annotations

RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS_NS = "http://www.w3.org/2000/01/rdf-schema#"
OWL_NS = "http://www.w3.org/2002/07/owl#"
XSD_NS = "http://www.w3.org/2001/XMLSchema#"

AGRIONT_NS = "http://www.ucd.ie/consus/AgriOnt#"
AGRIKMAP_NS = "http://www.ucd.ie/consus/AgriKMap#"

RDF_TYPE = RDF_NS + "type"
RDFS_LABEL = RDFS_NS + "label"
RDFS_COMMENT = RDFS_NS + "comment"
RDFS_SUBCLASSOF = RDFS_NS + "subClassOf"
RDFS_DOMAIN = RDFS_NS + "domain"
RDFS_RANGE = RDFS_NS + "range"

OWL_CLASS = OWL_NS + "Class"
OWL_OBJECT_PROPERTY = OWL_NS + "ObjectProperty"
OWL_DATATYPE_PROPERTY = OWL_NS + "DatatypeProperty"
OWL_NAMED_INDIVIDUAL = OWL_NS + "NamedIndividual"

XSD_STRING = XSD_NS + "string"
XSD_INTEGER = XSD_NS + "integer"
XSD_DECIMAL = XSD_NS + "decimal"

# Default prefix map used by the bundled fixtures, the CLI and the server.
DEFAULT_PREFIXES: dict[str, str] = {
    "rdf": RDF_NS,
    "rdfs": RDFS_NS,
    "owl": OWL_NS,
    "xsd": XSD_NS,
    "AgriOnt": AGRIONT_NS,
    "AgriKMap": AGRIKMAP_NS,
}


def agriont(local: str) -> str:
    return AGRIONT_NS + local


def agrikmap(local: str) -> str:
    return AGRIKMAP_NS + local
