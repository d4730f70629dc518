"""Command-line interface.

Every invocation rebuilds the service from the ontology (bundled by default)
plus the optional dataset dump, runs one subcommand, and — for commands that
change the store — persists the dump back.  Exit codes: 0 success, 1 user
error (bad input, bad file, domain error), 2 internal error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .errors import AgriKMapError
from .sparql import evaluate, parse_query
from .server import KnowledgeService, ServerConfig, error_payload, serve
from .sparql import results_to_json

EXIT_OK = 0
EXIT_USER = 1
EXIT_INTERNAL = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="agrikmap",
        description="Agricultural knowledge map: ingest mined-model descriptors "
        "as triples and query them.",
    )
    parser.add_argument(
        "--data",
        metavar="PATH",
        help="dataset dump (Turtle); read at startup if present, written back "
        "by load/ingest",
    )
    parser.add_argument(
        "--ontology",
        metavar="PATH",
        help="ontology file (Turtle); defaults to the bundled one",
    )
    parser.add_argument(
        "--lenient",
        action="store_true",
        help="mint classes for unknown concepts instead of rejecting them",
    )
    parser.add_argument(
        "--json",
        action="store_true",
        help="machine-readable errors and output where applicable",
    )
    parser.add_argument(
        "-v", "--verbose", action="store_true", help="log at debug level"
    )

    sub = parser.add_subparsers(dest="command", required=True)

    p_load = sub.add_parser("load", help="bulk-insert triples from a Turtle file")
    p_load.add_argument("file", help="Turtle file to insert")

    p_ingest = sub.add_parser("ingest", help="wrap a model descriptor into triples")
    p_ingest.add_argument("file", help="descriptor JSON file")

    p_query = sub.add_parser("query", help="evaluate a query against the store")
    p_query.add_argument("file", nargs="?", help="file containing the query text")
    p_query.add_argument("-e", "--execute", metavar="TEXT", help="query text inline")
    p_query.add_argument(
        "--table", action="store_true", help="print an aligned table instead of JSON"
    )

    p_export = sub.add_parser("export", help="serialize the store as Turtle")
    p_export.add_argument("out", nargs="?", default="-", help="output file, - for stdout")

    sub.add_parser("stats", help="ontology metrics and triple count as JSON")

    p_serve = sub.add_parser("serve", help="run the HTTP endpoint")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=3030)
    p_serve.add_argument(
        "--ui", metavar="DIR", default=None, help="mount a static UI directory at /ui/"
    )
    p_serve.add_argument(
        "--max-body-bytes", type=int, default=8 * 1024 * 1024, metavar="N"
    )
    p_serve.add_argument("--read-timeout", type=float, default=30.0, metavar="SECONDS")

    return parser


def _service(args: argparse.Namespace) -> KnowledgeService:
    return KnowledgeService.from_files(
        ontology_path=args.ontology,
        dataset_path=args.data,
        strict=not args.lenient,
    )


def _emit_error(exc: Exception, as_json: bool) -> None:
    if as_json:
        _, payload = error_payload(exc)
        print(json.dumps(payload), file=sys.stderr)
    else:
        print(f"error: {exc}", file=sys.stderr)


def _format_table(results: dict) -> str:
    variables = results["head"]["vars"]
    rows = [
        [binding.get(v, {}).get("value", "") for v in variables]
        for binding in results["results"]["bindings"]
    ]
    widths = [
        max(len(v), *(len(row[i]) for row in rows)) if rows else len(v)
        for i, v in enumerate(variables)
    ]
    lines = [
        "  ".join(v.ljust(widths[i]) for i, v in enumerate(variables)),
        "  ".join("-" * w for w in widths),
    ]
    lines.extend(
        "  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)) for row in rows
    )
    lines.append(f"({len(rows)} row{'s' if len(rows) != 1 else ''})")
    return "\n".join(lines)


def _cmd_load(args) -> int:
    if not args.data:
        print("error: load needs --data to persist into", file=sys.stderr)
        return EXIT_USER
    service = _service(args)
    text = Path(args.file).read_text(encoding="utf-8")
    added = service.insert_turtle(text)
    service.persist(args.data)
    payload = {"added": added, "triples": len(service.store)}
    print(json.dumps(payload) if args.json else f"added {added} triples ({payload['triples']} total)")
    return EXIT_OK


def _cmd_ingest(args) -> int:
    service = _service(args)
    report = service.ingest_json(Path(args.file).read_text(encoding="utf-8"))
    if args.data:
        service.persist(args.data)
    if args.json:
        print(json.dumps(report.as_dict(), indent=2))
    else:
        print(f"model {report.model}")
        print(f"  task            {report.task}")
        print(f"  conditions      {', '.join(report.conditions) or '-'}")
        print(f"  output          {report.output or '-'}")
        print(f"  transformations {', '.join(report.transformations) or '-'}")
        print(f"  states          {', '.join(report.states) or '-'}")
        if report.minted_classes:
            print(f"  minted classes  {', '.join(report.minted_classes)}")
        print(f"  triples added   {report.triples_added}")
    return EXIT_OK


def _cmd_query(args) -> int:
    if (args.file is None) == (args.execute is None):
        print("error: pass exactly one of <file> or -e TEXT", file=sys.stderr)
        return EXIT_USER
    text = args.execute if args.execute is not None else Path(args.file).read_text(
        encoding="utf-8"
    )
    service = _service(args)
    results = results_to_json(evaluate(parse_query(text), service.store))
    print(_format_table(results) if args.table else json.dumps(results, indent=2))
    return EXIT_OK


def _cmd_export(args) -> int:
    service = _service(args)
    text = service.export_turtle()
    if args.out == "-":
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote {len(service.store)} triples to {args.out}", file=sys.stderr)
    return EXIT_OK


def _cmd_stats(args) -> int:
    service = _service(args)
    print(json.dumps(service.stats(), indent=2))
    return EXIT_OK


def _cmd_serve(args) -> int:
    config = ServerConfig(
        host=args.host,
        port=args.port,
        dataset_path=args.data,
        ontology_path=args.ontology,
        strict=not args.lenient,
        max_body_bytes=args.max_body_bytes,
        read_timeout=args.read_timeout,
        ui_dir=args.ui,
    )
    print(f"serving on http://{config.host}:{config.port}/", file=sys.stderr)
    serve(config)
    return EXIT_OK


_COMMANDS = {
    "load": _cmd_load,
    "ingest": _cmd_ingest,
    "query": _cmd_query,
    "export": _cmd_export,
    "stats": _cmd_stats,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USER
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
    )
    try:
        return _COMMANDS[args.command](args)
    except (AgriKMapError, ValueError) as exc:
        _emit_error(exc, args.json)
        return EXIT_USER
    except OSError as exc:
        _emit_error(exc, args.json)
        return EXIT_USER
    except KeyboardInterrupt:
        return EXIT_USER
    except Exception as exc:  # pragma: no cover - defensive
        logging.getLogger("agrikmap.cli").exception("internal error")
        _emit_error(exc, args.json)
        return EXIT_INTERNAL


def entrypoint() -> None:
    raise SystemExit(main(sys.argv[1:]))
