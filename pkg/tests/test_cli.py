"""Command-line interface tests.

Most tests call ``main`` in-process and inspect captured stdio plus exit
codes; one end-to-end test runs ``python3 -m agrikmap serve`` as a child
process and checks graceful-shutdown persistence.
"""

from __future__ import annotations

import json
import signal
import socket
import subprocess
import sys
import time

import pytest
import requests

from agrikmap import fixtures, parse_turtle
from agrikmap.cli import EXIT_OK, EXIT_USER, main
from agrikmap.vocab import AGRIKMAP_NS as K
from agrikmap.vocab import AGRIONT_NS as A

REGRESSION_QUERY = (
    "SELECT ?s WHERE { ?s a <http://www.ucd.ie/consus/AgriOnt#Regression> . }"
)
CONDITION_QUERY = (
    "SELECT ?c WHERE { "
    "<http://www.ucd.ie/consus/AgriKMap#Regressor_004> "
    "<http://www.ucd.ie/consus/AgriOnt#hasCondition> ?c . }"
)


def write_descriptor(tmp_path, name: str):
    path = tmp_path / f"{name}.json"
    path.write_text(fixtures.descriptor_text(name), encoding="utf-8")
    return path


class TestStats:
    def test_stats_json(self, capsys):
        assert main(["stats"]) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["classes"] == 67
        assert payload["axioms"] == 173
        assert payload["triples"] > 0


class TestIngestAndQuery:
    def test_ingest_then_query_flow(self, tmp_path, capsys):
        dump = tmp_path / "dump.ttl"
        descriptor = write_descriptor(tmp_path, "regressor_004")

        assert main(["--data", str(dump), "ingest", str(descriptor)]) == EXIT_OK
        out = capsys.readouterr().out
        assert f"model {K}Regressor_004" in out
        assert "triples added" in out
        assert dump.exists()

        assert main(["--data", str(dump), "query", "-e", CONDITION_QUERY]) == EXIT_OK
        results = json.loads(capsys.readouterr().out)
        values = sorted(b["c"]["value"] for b in results["results"]["bindings"])
        assert values == [K + "Soil_001", K + "Soil_002", K + "Soil_003"]

    def test_ingest_json_report(self, tmp_path, capsys):
        dump = tmp_path / "dump.ttl"
        descriptor = write_descriptor(tmp_path, "cluster_007")
        assert main(["--json", "--data", str(dump), "ingest", str(descriptor)]) == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["model"] == K + "Cluster_007"
        assert report["task"] == "clustering"
        assert report["triples_added"] > 0

    def test_ingest_duplicate_fails(self, tmp_path, capsys):
        dump = tmp_path / "dump.ttl"
        descriptor = write_descriptor(tmp_path, "regressor_004")
        assert main(["--data", str(dump), "ingest", str(descriptor)]) == EXIT_OK
        capsys.readouterr()

        conflicting = json.loads(fixtures.descriptor_text("regressor_004"))
        conflicting["algorithm"] = "different algorithm"
        clash = tmp_path / "clash.json"
        clash.write_text(json.dumps(conflicting), encoding="utf-8")
        assert main(["--data", str(dump), "ingest", str(clash)]) == EXIT_USER
        assert "already ingested" in capsys.readouterr().err

    def test_reingest_identical_is_idempotent(self, tmp_path, capsys):
        dump = tmp_path / "dump.ttl"
        descriptor = write_descriptor(tmp_path, "regressor_004")
        assert main(["--data", str(dump), "ingest", str(descriptor)]) == EXIT_OK
        first = dump.read_text(encoding="utf-8")
        capsys.readouterr()
        assert main(["--data", str(dump), "ingest", str(descriptor)]) == EXIT_OK
        assert "triples added   0" in capsys.readouterr().out
        assert dump.read_text(encoding="utf-8") == first

    def test_bad_descriptor_json_error_shape(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"task": "regression"}), encoding="utf-8")
        assert main(["--json", "ingest", str(bad)]) == EXIT_USER
        payload = json.loads(capsys.readouterr().err)
        assert payload["error"] == "SchemaError"
        assert payload["field"] == "model_id"

    def test_missing_descriptor_file(self, tmp_path, capsys):
        assert main(["ingest", str(tmp_path / "nope.json")]) == EXIT_USER
        assert "error:" in capsys.readouterr().err

    def test_lenient_flag_mints(self, tmp_path, capsys):
        dump = tmp_path / "dump.ttl"
        doc = tmp_path / "doc.json"
        doc.write_text(
            json.dumps(
                {
                    "model_id": "Model_3",
                    "task": "clustering",
                    "algorithm": "k-means",
                    "inputs": [{"concept": "Vibranium", "transformation": "avg"}],
                }
            ),
            encoding="utf-8",
        )
        assert main(["ingest", str(doc)]) == EXIT_USER  # strict by default
        capsys.readouterr()
        assert main(["--lenient", "--data", str(dump), "ingest", str(doc)]) == EXIT_OK
        assert "minted classes" in capsys.readouterr().out


class TestQueryCommand:
    def test_query_from_file(self, tmp_path, capsys):
        dump = tmp_path / "dump.ttl"
        main(["--data", str(dump), "ingest", str(write_descriptor(tmp_path, "regressor_004"))])
        capsys.readouterr()
        qfile = tmp_path / "q.rq"
        qfile.write_text(REGRESSION_QUERY, encoding="utf-8")
        assert main(["--data", str(dump), "query", str(qfile)]) == EXIT_OK
        results = json.loads(capsys.readouterr().out)
        assert [b["s"]["value"] for b in results["results"]["bindings"]] == [
            K + "Regressor_004"
        ]

    def test_table_format(self, tmp_path, capsys):
        dump = tmp_path / "dump.ttl"
        main(["--data", str(dump), "ingest", str(write_descriptor(tmp_path, "regressor_004"))])
        capsys.readouterr()
        assert main(["--data", str(dump), "query", "--table", "-e", REGRESSION_QUERY]) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].strip() == "s"
        assert set(lines[1].strip()) == {"-"}
        assert lines[2].strip() == K + "Regressor_004"
        assert lines[3] == "(1 row)"

    def test_table_pluralizes_empty(self, capsys):
        assert main(["query", "--table", "-e", REGRESSION_QUERY]) == EXIT_OK
        assert capsys.readouterr().out.splitlines()[-1] == "(0 rows)"

    def test_exactly_one_query_source_required(self, tmp_path, capsys):
        qfile = tmp_path / "q.rq"
        qfile.write_text(REGRESSION_QUERY, encoding="utf-8")
        assert main(["query"]) == EXIT_USER
        assert "exactly one" in capsys.readouterr().err
        assert main(["query", str(qfile), "-e", REGRESSION_QUERY]) == EXIT_USER
        assert "exactly one" in capsys.readouterr().err

    def test_missing_query_file(self, tmp_path, capsys):
        assert main(["query", str(tmp_path / "nope.rq")]) == EXIT_USER

    def test_unsupported_feature_json_error(self, capsys):
        assert main(["--json", "query", "-e", "ASK { ?s ?p ?o }"]) == EXIT_USER
        payload = json.loads(capsys.readouterr().err)
        assert payload == {"error": "UnsupportedFeature", "feature": "ASK"}

    def test_syntax_error_plain(self, capsys):
        assert main(["query", "-e", "SELECT WHERE { ?s ?p ?o }"]) == EXIT_USER
        assert "error:" in capsys.readouterr().err


class TestLoadAndExport:
    def test_load_requires_data(self, tmp_path, capsys):
        ttl = tmp_path / "extra.ttl"
        ttl.write_text("<http://x/s> <http://x/p> <http://x/o> .", encoding="utf-8")
        assert main(["load", str(ttl)]) == EXIT_USER
        assert "--data" in capsys.readouterr().err

    def test_load_then_reload_is_idempotent(self, tmp_path, capsys):
        dump = tmp_path / "dump.ttl"
        ttl = tmp_path / "extra.ttl"
        ttl.write_text(
            "@prefix ex: <http://example.org/> . ex:s ex:p ex:o , ex:o2 .",
            encoding="utf-8",
        )
        assert main(["--data", str(dump), "load", str(ttl)]) == EXIT_OK
        assert "added 2 triples" in capsys.readouterr().out
        assert main(["--data", str(dump), "load", str(ttl)]) == EXIT_OK
        assert "added 0 triples" in capsys.readouterr().out

    def test_load_json_output(self, tmp_path, capsys):
        dump = tmp_path / "dump.ttl"
        ttl = tmp_path / "extra.ttl"
        ttl.write_text("<http://x/s> <http://x/p> <http://x/o> .", encoding="utf-8")
        assert main(["--json", "--data", str(dump), "load", str(ttl)]) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["added"] == 1

    def test_export_stdout_round_trips(self, tmp_path, capsys):
        dump = tmp_path / "dump.ttl"
        main(["--data", str(dump), "ingest", str(write_descriptor(tmp_path, "regressor_004"))])
        capsys.readouterr()
        assert main(["--data", str(dump), "export"]) == EXIT_OK
        text = capsys.readouterr().out
        graph = parse_turtle(text)
        assert len(graph) == 173 + 21  # ontology triples plus the wrapped model

    def test_export_to_file(self, tmp_path, capsys):
        out = tmp_path / "out.ttl"
        assert main(["export", str(out)]) == EXIT_OK
        err = capsys.readouterr().err
        assert f"wrote 173 triples to {out}" in err
        assert len(parse_turtle(out.read_text(encoding="utf-8"))) == 173

    def test_bad_ontology_path(self, tmp_path, capsys):
        assert main(["--ontology", str(tmp_path / "nope.ttl"), "stats"]) == EXIT_USER
        assert "cannot read ontology" in capsys.readouterr().err


class TestArgumentHandling:
    def test_no_subcommand_is_user_error(self, capsys):
        assert main([]) == EXIT_USER
        capsys.readouterr()

    def test_help_exits_cleanly(self, capsys):
        assert main(["--help"]) == EXIT_OK
        assert "agrikmap" in capsys.readouterr().out

    def test_unknown_subcommand(self, capsys):
        assert main(["frobnicate"]) == EXIT_USER
        capsys.readouterr()


def free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


class TestServeProcess:
    def test_serve_ingest_sigterm_persists(self, tmp_path):
        port = free_port()
        dump = tmp_path / "dump.ttl"
        proc = subprocess.Popen(
            [
                sys.executable,
                "-m",
                "agrikmap",
                "--data",
                str(dump),
                "serve",
                "--port",
                str(port),
            ],
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
        )
        base = f"http://127.0.0.1:{port}"
        try:
            deadline = time.monotonic() + 15
            while True:
                try:
                    if requests.get(f"{base}/health", timeout=1).status_code == 200:
                        break
                except requests.ConnectionError:
                    if proc.poll() is not None:
                        raise AssertionError(
                            f"server exited early: {proc.stderr.read().decode()}"
                        )
                    if time.monotonic() > deadline:
                        raise
                    time.sleep(0.05)

            doc = {
                "model_id": "Cluster_900",
                "task": "clustering",
                "algorithm": "k-means",
                "inputs": [{"concept": "Temperature", "transformation": "avg"}],
            }
            r = requests.post(f"{base}/ingest", json=doc, timeout=5)
            assert r.status_code == 200
        finally:
            proc.send_signal(signal.SIGTERM)
            rc = proc.wait(timeout=15)

        assert rc == 0
        graph = parse_turtle(dump.read_text(encoding="utf-8"))
        from agrikmap import Iri, Triple

        assert (
            Triple(
                Iri(K + "Cluster_900"),
                Iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#type"),
                Iri(A + "Clustering"),
            )
            in graph
        )
