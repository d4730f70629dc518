#!/usr/bin/env python3
"""End-to-end walkthrough on the bundled fixtures.

Loads the ontology, ingests the five bundled model descriptors, then runs
the four showcase queries and prints their result tables.  Run with no
arguments; pass --json to dump raw results JSON instead of tables.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from agrikmap import KnowledgeService, fixtures
from agrikmap.cli import _format_table


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--json", action="store_true", help="print raw results JSON")
    args = parser.parse_args()

    service = KnowledgeService.from_files()
    print(f"ontology loaded: {json.dumps(service.stats())}")

    for name, descriptor in fixtures.descriptors():
        report = service.ingest(descriptor)
        print(
            f"ingested {name}: +{report.triples_added} triples, "
            f"output={report.output or '-'}"
        )
    print(f"store now holds {len(service.store)} triples\n")

    t0 = time.perf_counter()
    for name, text in fixtures.queries():
        results = service.query(text)
        print(f"=== {name} ===")
        if args.json:
            print(json.dumps(results, indent=2))
        else:
            print(_format_table(results))
        print()
    elapsed = time.perf_counter() - t0
    print(f"all four queries evaluated in {elapsed * 1000:.1f} ms")
    return 0


if __name__ == "__main__":
    sys.exit(main())
