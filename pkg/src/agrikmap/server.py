"""HTTP endpoint and shared service facade.

``KnowledgeService`` owns one ontology index and one store and exposes the
operations the HTTP endpoint and the CLI both need.  ``serve`` runs a
threaded HTTP server: query requests share read access to the store while
ingests serialize through the writer role, so a model is never half-visible
to a query.
"""

from __future__ import annotations

import json
import logging
import mimetypes
import os
import signal
import threading
import urllib.parse
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from . import fixtures
from .errors import (
    AgriKMapError,
    AmbiguousConceptError,
    BindError,
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
from .ontology import OntologyIndex, compute_metrics, load_ontology
from .rdf import Graph, Iri, parse_turtle, serialize_turtle
from .sparql import evaluate, parse_query, results_to_json, term_json
from .store import Store, TriplePattern, Variable
from .kmodel import TASK_CLASSES, UNCLASSIFIED_CONCEPT, TaskKind
from .vocab import DEFAULT_PREFIXES, OWL_CLASS, RDF_TYPE, RDFS_SUBCLASSOF
from .wrapper import (
    ModelDescriptor,
    WrapReport,
    descriptor_from_dict,
    parse_descriptor,
    unwrap,
    wrap,
)

log = logging.getLogger("agrikmap.server")

_RDF_TYPE = Iri(RDF_TYPE)


@dataclass(frozen=True)
class ServerConfig:
    """Settings for one service process."""

    host: str = "127.0.0.1"
    port: int = 3030
    dataset_path: str | None = None
    ontology_path: str | None = None
    strict: bool = True
    max_body_bytes: int = 8 * 1024 * 1024
    read_timeout: float = 30.0
    ui_dir: str | None = None

    def __post_init__(self):
        # Port 0 asks the OS for an ephemeral port (the bound server reports
        # the real one via server_address).
        if not (0 <= self.port <= 65535):
            raise ValueError(f"port out of range: {self.port}")
        if self.max_body_bytes <= 0:
            raise ValueError("max_body_bytes must be positive")
        if self.read_timeout <= 0:
            raise ValueError("read_timeout must be positive")


def _minted_classes_in(graph: Graph, index: OntologyIndex) -> dict[str, str]:
    """Classes a previous lenient run added to a dataset dump: subjects typed
    owl:Class that the base ontology does not know, attached under whichever
    known parent their subclass edge names."""
    rdf_type, owl_class, subclass_of = Iri(RDF_TYPE), Iri(OWL_CLASS), Iri(RDFS_SUBCLASSOF)
    declared = {
        t.subject.value
        for t in graph
        if isinstance(t.subject, Iri) and t.predicate == rdf_type and t.object == owl_class
    }
    minted: dict[str, str] = {}
    for t in graph:
        if (
            t.predicate == subclass_of
            and isinstance(t.subject, Iri)
            and isinstance(t.object, Iri)
            and t.subject.value in declared
            and not index.is_class(t.subject.value)
            and index.is_class(t.object.value)
        ):
            minted[t.subject.value] = t.object.value
    return minted


class KnowledgeService:
    """One ontology index plus one store, with the operations both front
    ends (HTTP and CLI) share."""

    def __init__(self, index: OntologyIndex, store: Store, strict: bool = True):
        self.index = index
        self.store = store
        self.strict = strict

    @classmethod
    def from_files(
        cls,
        ontology_path: str | None = None,
        dataset_path: str | None = None,
        strict: bool = True,
    ) -> "KnowledgeService":
        """Build a service from an ontology file (bundled one by default)
        and an optional dataset dump.  The ontology is loaded into both the
        concept index and the store, so queries can traverse schema triples.
        """
        if ontology_path is None:
            text = fixtures.ontology_text()
            source = "bundled ontology"
        else:
            try:
                text = Path(ontology_path).read_text(encoding="utf-8")
            except OSError as exc:
                raise LoadError(f"cannot read ontology {ontology_path}: {exc}") from exc
            source = ontology_path
        try:
            graph = parse_turtle(text)
        except ParseIssue as exc:
            raise LoadError(f"{source}, {exc}") from exc
        index = load_ontology(graph)
        store = Store(prefixes=dict(DEFAULT_PREFIXES))
        store.insert_graph(graph)
        if dataset_path and Path(dataset_path).exists():
            try:
                data_text = Path(dataset_path).read_text(encoding="utf-8")
            except OSError as exc:
                raise LoadError(f"cannot read dataset {dataset_path}: {exc}") from exc
            try:
                dataset = parse_turtle(data_text)
            except ParseIssue as exc:
                raise LoadError(f"{dataset_path}, {exc}") from exc
            store.insert_graph(dataset)
            index = index.extend(_minted_classes_in(dataset, index))
        return cls(index, store, strict=strict)

    # -- operations ---------------------------------------------------

    def query(self, text: str) -> dict:
        """Parse and evaluate a query, returning results JSON."""
        return results_to_json(evaluate(parse_query(text), self.store))

    def ingest(self, descriptor: ModelDescriptor) -> WrapReport:
        report = wrap(descriptor, self.index, self.store, strict=self.strict)
        if report.minted_classes:
            # Adopt lenient-minted classes so stats and later lookups see them.
            self.index = self.index.extend(
                {iri: UNCLASSIFIED_CONCEPT for iri in report.minted_classes}
            )
        return report

    def ingest_json(self, text: str) -> WrapReport:
        return self.ingest(parse_descriptor(text))

    def insert_turtle(self, text: str) -> int:
        """Bulk-insert Turtle text; returns the number of new triples."""
        return self.store.insert_graph(parse_turtle(text))

    def export_turtle(self) -> str:
        return serialize_turtle(self.store.to_graph())

    def stats(self) -> dict:
        out = compute_metrics(self.index).as_dict()
        out["triples"] = len(self.store)
        return out

    def browse(self, iri: str) -> dict:
        """One-hop neighborhood of a node: triples it appears in as subject
        and as object, each rendered in the results-JSON term shape."""
        node = Iri(iri)

        def row(triple) -> dict:
            return {
                "subject": term_json(triple.subject),
                "predicate": term_json(triple.predicate),
                "object": term_json(triple.object),
            }

        with self.store.read_lock():
            subject_of = [
                row(t)
                for t in self.store.match(TriplePattern(node, Variable("p"), Variable("o")))
            ]
            object_of = [
                row(t)
                for t in self.store.match(TriplePattern(Variable("s"), Variable("p"), node))
            ]
        return {"iri": iri, "subject_of": subject_of, "object_of": object_of}

    def models(self) -> dict:
        """Ingested model IRIs grouped by task."""
        groups: dict[str, list[str]] = {}
        with self.store.read_lock():
            for kind in TaskKind:
                class_iri = Iri(TASK_CLASSES[kind])
                subjects = sorted(
                    t.subject.value
                    for t in self.store.match(
                        TriplePattern(Variable("s"), _RDF_TYPE, class_iri)
                    )
                    if isinstance(t.subject, Iri)
                )
                groups[kind.value] = subjects
        return groups

    def describe_model(self, model_id: str) -> ModelDescriptor:
        return unwrap(model_id, self.store)

    def persist(self, path: str) -> None:
        """Write the store to a Turtle dump atomically (write + rename)."""
        tmp = f"{path}.tmp"
        Path(tmp).write_text(self.export_turtle(), encoding="utf-8")
        os.replace(tmp, path)


# ---------------------------------------------------------------------------
# Error mapping
# ---------------------------------------------------------------------------


def error_payload(exc: Exception) -> tuple[int, dict]:
    """Map a domain error to (HTTP status, JSON body with an "error" field)."""
    if isinstance(exc, UnsupportedFeatureError):
        return 400, {"error": "UnsupportedFeature", "feature": exc.feature}
    if isinstance(exc, (QuerySyntaxError, TurtleSyntaxError)):
        return 400, {
            "error": "SyntaxError",
            "line": exc.line,
            "column": exc.column,
            "message": exc.message,
        }
    if isinstance(exc, UnknownPrefixError):
        return 400, {"error": "UnknownPrefix", "message": str(exc)}
    if isinstance(exc, SchemaError):
        return 400, {"error": "SchemaError", "field": exc.field, "message": str(exc)}
    if isinstance(exc, UnknownConceptError):
        return 400, {"error": "UnknownConcept", "message": str(exc)}
    if isinstance(exc, AmbiguousConceptError):
        return 400, {"error": "AmbiguousConcept", "message": str(exc)}
    if isinstance(exc, InvalidRepresentationError):
        return 400, {
            "error": "InvalidRepresentation",
            "violations": [str(v) for v in exc.violations],
            "message": str(exc),
        }
    if isinstance(exc, DuplicateModelError):
        return 409, {"error": "DuplicateModel", "message": str(exc)}
    if isinstance(exc, UnknownModelError):
        return 404, {"error": "UnknownModel", "message": str(exc)}
    if isinstance(exc, AgriKMapError):
        return 400, {"error": type(exc).__name__, "message": str(exc)}
    return 500, {"error": "InternalError"}


# ---------------------------------------------------------------------------
# HTTP layer
# ---------------------------------------------------------------------------

_ENDPOINTS = [
    "GET /health",
    "GET|POST /sparql",
    "POST /ingest",
    "POST /data",
    "GET /export",
    "GET /stats",
    "GET /browse/{iri}",
    "GET /models",
]


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    server_version = "agrikmap"
    service: KnowledgeService = None  # set per server class
    config: ServerConfig = None

    # -- plumbing ------------------------------------------------------

    def log_message(self, fmt, *args):  # route access logs to logging
        log.debug("%s - %s", self.address_string(), fmt % args)

    def _send(self, status: int, body: bytes, content_type: str) -> None:
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def _send_json(self, status: int, payload: dict) -> None:
        body = json.dumps(payload, indent=2).encode("utf-8") + b"\n"
        self._send(status, body, "application/json")

    def _send_error_json(self, exc: Exception) -> None:
        status, payload = error_payload(exc)
        if status == 500:
            log.exception("internal error handling %s %s", self.command, self.path)
        self._send_json(status, payload)

    def _read_body(self) -> bytes | None:
        length = self.headers.get("Content-Length")
        if length is None:
            self._send_json(411, {"error": "LengthRequired"})
            return None
        try:
            n = int(length)
        except ValueError:
            self._send_json(400, {"error": "BadRequest", "message": "bad Content-Length"})
            return None
        if n < 0:
            self._send_json(400, {"error": "BadRequest", "message": "bad Content-Length"})
            return None
        if n > self.config.max_body_bytes:
            self._send_json(413, {"error": "BodyTooLarge", "limit": self.config.max_body_bytes})
            return None
        return self.rfile.read(n)

    # -- routing -------------------------------------------------------

    def do_OPTIONS(self):  # CORS preflight for the browser console
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_GET(self):
        parsed = urllib.parse.urlsplit(self.path)
        route = parsed.path
        try:
            if route == "/health":
                self._send_json(200, {"status": "ok", "triples": len(self.service.store)})
            elif route == "/sparql":
                params = urllib.parse.parse_qs(parsed.query)
                texts = params.get("query")
                if not texts:
                    self._send_json(
                        400, {"error": "BadRequest", "message": "missing query parameter"}
                    )
                    return
                self._respond_query(texts[0])
            elif route == "/export":
                body = self.service.export_turtle().encode("utf-8")
                self._send(200, body, "text/turtle; charset=utf-8")
            elif route == "/stats":
                self._send_json(200, self.service.stats())
            elif route == "/models":
                self._send_json(200, self.service.models())
            elif route.startswith("/browse/"):
                raw = route[len("/browse/") :]
                iri = urllib.parse.unquote(raw)
                if not iri:
                    self._send_json(404, {"error": "NotFound", "message": "empty IRI"})
                    return
                try:
                    payload = self.service.browse(iri)
                except ValueError as exc:
                    self._send_json(400, {"error": "BadRequest", "message": str(exc)})
                    return
                self._send_json(200, payload)
            elif route == "/" and not self.config.ui_dir:
                self._send_json(200, {"service": "agrikmap", "endpoints": _ENDPOINTS})
            elif self.config.ui_dir and (route == "/" or route.startswith("/ui")):
                self._serve_static(route)
            else:
                self._send_json(404, {"error": "NotFound", "message": route})
        except BrokenPipeError:
            pass
        except Exception as exc:
            self._send_error_json(exc)

    def do_POST(self):
        parsed = urllib.parse.urlsplit(self.path)
        route = parsed.path
        try:
            body = self._read_body()
            if body is None:
                return
            if route == "/sparql":
                content_type = (self.headers.get("Content-Type") or "").split(";")[0].strip()
                if content_type == "application/x-www-form-urlencoded":
                    params = urllib.parse.parse_qs(body.decode("utf-8"))
                    texts = params.get("query")
                    if not texts:
                        self._send_json(
                            400, {"error": "BadRequest", "message": "missing query field"}
                        )
                        return
                    text = texts[0]
                elif content_type in ("application/sparql-query", "text/plain", ""):
                    text = body.decode("utf-8")
                else:
                    self._send_json(
                        415, {"error": "UnsupportedMediaType", "message": content_type}
                    )
                    return
                self._respond_query(text)
            elif route == "/ingest":
                try:
                    obj = json.loads(body.decode("utf-8"))
                except (UnicodeDecodeError, json.JSONDecodeError) as exc:
                    self._send_json(
                        400, {"error": "SchemaError", "field": "$", "message": str(exc)}
                    )
                    return
                report = self.service.ingest(descriptor_from_dict(obj))
                self._send_json(200, report.as_dict())
            elif route == "/data":
                added = self.service.insert_turtle(body.decode("utf-8"))
                self._send_json(200, {"added": added, "triples": len(self.service.store)})
            else:
                self._send_json(404, {"error": "NotFound", "message": route})
        except BrokenPipeError:
            pass
        except Exception as exc:
            self._send_error_json(exc)

    def _respond_query(self, text: str) -> None:
        payload = self.service.query(text)
        body = json.dumps(payload, indent=2).encode("utf-8") + b"\n"
        self._send(200, body, "application/sparql-results+json")

    def _serve_static(self, route: str) -> None:
        root = Path(self.config.ui_dir).resolve()
        rel = route[len("/ui") :] if route.startswith("/ui") else route
        rel = rel.lstrip("/") or "index.html"
        target = (root / rel).resolve()
        if root not in target.parents and target != root:
            self._send_json(404, {"error": "NotFound", "message": route})
            return
        if target.is_dir():
            target = target / "index.html"
        if not target.is_file():
            self._send_json(404, {"error": "NotFound", "message": route})
            return
        content_type = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
        self._send(200, target.read_bytes(), content_type)


def make_server(service: KnowledgeService, config: ServerConfig) -> ThreadingHTTPServer:
    """Bind a threaded HTTP server for the service (not yet serving)."""
    handler = type(
        "BoundHandler",
        (_Handler,),
        {"service": service, "config": config, "timeout": config.read_timeout},
    )
    server_cls = type(
        "BoundServer",
        (ThreadingHTTPServer,),
        # The socketserver default backlog (5) drops connections when many
        # clients open sockets in a burst.
        {"request_queue_size": 128, "daemon_threads": True},
    )
    try:
        return server_cls((config.host, config.port), handler)
    except OSError as exc:
        raise BindError(f"cannot bind {config.host}:{config.port}: {exc}") from exc


def serve(config: ServerConfig, service: KnowledgeService | None = None) -> None:
    """Run the endpoint until SIGINT/SIGTERM, then persist and exit."""
    if service is None:
        service = KnowledgeService.from_files(
            ontology_path=config.ontology_path,
            dataset_path=config.dataset_path,
            strict=config.strict,
        )
    httpd = make_server(service, config)

    def shutdown(signum, frame):
        threading.Thread(target=httpd.shutdown, daemon=True).start()

    previous = {}
    for sig in (signal.SIGINT, signal.SIGTERM):
        previous[sig] = signal.signal(sig, shutdown)
    try:
        log.info("serving on http://%s:%d/ (%d triples)", config.host, config.port, len(service.store))
        httpd.serve_forever()
    finally:
        for sig, old in previous.items():
            signal.signal(sig, old)
        httpd.server_close()
        if config.dataset_path:
            service.persist(config.dataset_path)
            log.info("persisted %d triples to %s", len(service.store), config.dataset_path)
