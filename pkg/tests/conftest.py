from __future__ import annotations

import pytest

from agrikmap import KnowledgeService, Store, fixtures, load_ontology
from agrikmap.vocab import DEFAULT_PREFIXES


@pytest.fixture(scope="session")
def ontology_text() -> str:
    return fixtures.ontology_text()


@pytest.fixture(scope="session")
def ontology_graph():
    return fixtures.ontology_graph()


@pytest.fixture(scope="session")
def ontology_index(ontology_graph):
    return load_ontology(ontology_graph)


@pytest.fixture
def ontology_store(ontology_graph) -> Store:
    store = Store(prefixes=dict(DEFAULT_PREFIXES))
    store.insert_graph(ontology_graph)
    return store


def build_loaded_service() -> KnowledgeService:
    """Fresh service with the bundled ontology and all five fixture models."""
    service = KnowledgeService.from_files()
    for _, descriptor in fixtures.descriptors():
        service.ingest(descriptor)
    return service


@pytest.fixture
def loaded_service() -> KnowledgeService:
    return build_loaded_service()
