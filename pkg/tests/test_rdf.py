"""Term model, Turtle parser, and deterministic serializer."""

from __future__ import annotations

import pytest
from hypothesis import given, settings

from agrikmap import (
    BlankNode,
    Graph,
    Iri,
    Literal,
    Triple,
    TurtleSyntaxError,
    UnknownPrefixError,
    expand,
    parse_turtle,
    serialize_turtle,
    term_text,
)
from agrikmap.vocab import RDF_NS as RDF
from agrikmap.vocab import XSD_DECIMAL, XSD_INTEGER, XSD_NS, XSD_STRING

from .strategies import grounded_graphs

EX = "http://x#"


def ex(local: str) -> Iri:
    return Iri(EX + local)


# ---------------------------------------------------------------------------
# Term validation
# ---------------------------------------------------------------------------


class TestTerms:
    def test_iri_holds_value(self):
        assert Iri("http://a/b").value == "http://a/b"

    @pytest.mark.parametrize("bad", ["", "http://a b", "a<b", "a>b", "a\tb", "a\nb", "a\rb"])
    def test_iri_rejects_forbidden(self, bad):
        with pytest.raises(ValueError):
            Iri(bad)

    def test_plain_literal_defaults_to_string_datatype(self):
        lit = Literal("hello")
        assert lit.datatype == XSD_STRING
        assert lit.language is None

    def test_language_literal_has_no_datatype(self):
        lit = Literal("bonjour", language="fr")
        assert lit.datatype is None
        assert lit.language == "fr"

    def test_language_and_datatype_are_exclusive(self):
        with pytest.raises(ValueError):
            Literal("x", datatype=XSD_STRING, language="en")

    @pytest.mark.parametrize("tag", ["en", "en-GB", "zh-Hant-TW", "x-klingon1"])
    def test_valid_language_tags(self, tag):
        assert Literal("x", language=tag).language == tag

    @pytest.mark.parametrize("tag", ["", "1en", "en-", "-en", "en_GB", "en GB"])
    def test_invalid_language_tags(self, tag):
        with pytest.raises(ValueError):
            Literal("x", language=tag)

    def test_datatype_accepts_iri_object(self):
        assert Literal("5", datatype=Iri(XSD_INTEGER)) == Literal("5", datatype=XSD_INTEGER)

    def test_datatype_rejects_forbidden_characters(self):
        with pytest.raises(ValueError):
            Literal("5", datatype="not an iri")

    def test_typed_literals_are_structural(self):
        assert Literal("1", datatype=XSD_INTEGER) != Literal("1.0", datatype=XSD_DECIMAL)
        assert Literal("1", datatype=XSD_INTEGER) != Literal("1")

    @pytest.mark.parametrize("label", ["b0", "node", "A1_x"])
    def test_blank_node_labels(self, label):
        assert BlankNode(label).label == label

    @pytest.mark.parametrize("label", ["", "0b", "_b", "b-1", "b b"])
    def test_blank_node_rejects(self, label):
        with pytest.raises(ValueError):
            BlankNode(label)

    def test_triple_positions_are_validated(self):
        s, p, o = ex("s"), ex("p"), ex("o")
        with pytest.raises(ValueError):
            Triple(Literal("x"), p, o)
        with pytest.raises(ValueError):
            Triple(s, Literal("x"), o)
        with pytest.raises(ValueError):
            Triple(s, BlankNode("b"), o)
        assert Triple(BlankNode("b"), p, Literal("x")).object == Literal("x")

    def test_terms_are_hashable_and_frozen(self):
        assert len({ex("a"), ex("a"), Literal("a"), BlankNode("a")}) == 3
        with pytest.raises(Exception):
            ex("a").value = "other"


class TestTermText:
    def test_iri(self):
        assert term_text(ex("s")) == "<http://x#s>"

    def test_plain_literal(self):
        assert term_text(Literal("hi")) == '"hi"'

    def test_escapes(self):
        assert term_text(Literal('a"b\\c\nd\re\tf')) == '"a\\"b\\\\c\\nd\\re\\tf"'

    def test_language_literal(self):
        assert term_text(Literal("hi", language="en-GB")) == '"hi"@en-GB'

    def test_typed_literal(self):
        assert term_text(Literal("5", datatype=XSD_INTEGER)) == f'"5"^^<{XSD_INTEGER}>'

    def test_blank_node(self):
        assert term_text(BlankNode("b1")) == "_:b1"


class TestExpand:
    def test_expands_known_prefix(self):
        assert expand("ex:s", {"ex": EX}) == ex("s")

    def test_empty_local_part(self):
        assert expand("ex:", {"ex": EX}) == Iri(EX)

    def test_unknown_prefix(self):
        with pytest.raises(UnknownPrefixError) as info:
            expand("nope:s", {"ex": EX})
        assert info.value.label == "nope"

    def test_missing_colon(self):
        with pytest.raises(ValueError):
            expand("plain", {"ex": EX})


# ---------------------------------------------------------------------------
# Graph semantics
# ---------------------------------------------------------------------------


class TestGraph:
    def test_triples_are_a_set(self):
        t = Triple(ex("s"), ex("p"), ex("o"))
        g = Graph(triples={t, t})
        assert len(g.triples) == 1

    def test_equality_ignores_prefixes(self):
        t = Triple(ex("s"), ex("p"), ex("o"))
        assert Graph(triples={t}, prefixes={"ex": EX}) == Graph(triples={t})
        assert Graph(triples={t}) != Graph(triples=set())

    def test_graphs_are_unhashable(self):
        with pytest.raises(TypeError):
            hash(Graph())


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


class TestParser:
    def test_single_statement(self):
        g = parse_turtle("<http://x#s> <http://x#p> <http://x#o> .")
        assert g.triples == {Triple(ex("s"), ex("p"), ex("o"))}

    def test_prefixed_names_and_a_keyword(self):
        g = parse_turtle("@prefix ex: <http://x#> .\nex:s a ex:C .")
        assert g.triples == {Triple(ex("s"), Iri(RDF + "type"), ex("C"))}
        assert g.prefixes["ex"] == EX

    def test_prefix_named_a_does_not_shadow_keyword(self):
        g = parse_turtle("@prefix a: <http://x#> . a:s a:p a:o .")
        assert g.triples == {Triple(ex("s"), ex("p"), ex("o"))}

    def test_a_is_only_a_predicate_keyword(self):
        g = parse_turtle("@prefix ex: <http://x#> .\nex:s a ex:o .")
        (t,) = g.triples
        assert t.predicate == Iri(RDF + "type")

    def test_predicate_object_lists(self):
        g = parse_turtle(
            "@prefix ex: <http://x#> .\n"
            "ex:s ex:p ex:o1 , ex:o2 ;\n"
            "     ex:q ex:o3 ."
        )
        assert g.triples == {
            Triple(ex("s"), ex("p"), ex("o1")),
            Triple(ex("s"), ex("p"), ex("o2")),
            Triple(ex("s"), ex("q"), ex("o3")),
        }

    def test_trailing_semicolon_before_dot(self):
        g = parse_turtle("@prefix ex: <http://x#> . ex:s ex:p ex:o ; .")
        assert len(g.triples) == 1

    def test_comments_and_blank_lines(self):
        g = parse_turtle(
            "# leading comment\n"
            "@prefix ex: <http://x#> .\n"
            "\n"
            "ex:s ex:p ex:o . # trailing comment\n"
        )
        assert len(g.triples) == 1

    def test_hash_inside_iri_is_not_a_comment(self):
        g = parse_turtle("<http://x#s> <http://x#p> <http://x#o> .")
        assert len(g.triples) == 1

    def test_string_literals(self):
        g = parse_turtle('@prefix ex: <http://x#> . ex:s ex:p "plain" .')
        (t,) = g.triples
        assert t.object == Literal("plain")

    def test_escape_sequences(self):
        g = parse_turtle('@prefix ex: <http://x#> . ex:s ex:p "a\\"b\\\\c\\nd\\u0041\\U0001F600" .')
        (t,) = g.triples
        assert t.object == Literal('a"b\\c\nd' + "A" + "\U0001F600")

    def test_language_tagged_literal(self):
        g = parse_turtle('@prefix ex: <http://x#> . ex:s ex:p "hi"@en-GB .')
        (t,) = g.triples
        assert t.object == Literal("hi", language="en-GB")

    def test_typed_literal(self):
        g = parse_turtle(
            "@prefix ex: <http://x#> . @prefix xsd: <http://www.w3.org/2001/XMLSchema#> .\n"
            'ex:s ex:p "4.2"^^xsd:decimal .'
        )
        (t,) = g.triples
        assert t.object == Literal("4.2", datatype=XSD_DECIMAL)

    @pytest.mark.parametrize(
        "token,lexical,datatype",
        [
            ("42", "42", XSD_INTEGER),
            ("-7", "-7", XSD_INTEGER),
            ("+3", "+3", XSD_INTEGER),
            ("4.25", "4.25", XSD_DECIMAL),
            ("-0.5", "-0.5", XSD_DECIMAL),
        ],
    )
    def test_bare_numbers(self, token, lexical, datatype):
        g = parse_turtle(f"@prefix ex: <http://x#> . ex:s ex:p {token} .")
        (t,) = g.triples
        assert t.object == Literal(lexical, datatype=datatype)

    def test_bare_boolean_tokens_are_outside_the_subset(self):
        # Quoted "true"^^xsd:boolean works; the bare keyword form does not.
        with pytest.raises(TurtleSyntaxError):
            parse_turtle("@prefix ex: <http://x#> . ex:s ex:p true .")
        g = parse_turtle(
            "@prefix ex: <http://x#> . @prefix xsd: <http://www.w3.org/2001/XMLSchema#> .\n"
            'ex:s ex:p "true"^^xsd:boolean .'
        )
        (t,) = g.triples
        assert t.object == Literal("true", datatype=XSD_NS + "boolean")

    def test_labeled_blank_nodes(self):
        g = parse_turtle("@prefix ex: <http://x#> . _:b ex:p _:c .")
        (t,) = g.triples
        assert t.subject == BlankNode("b")
        assert t.object == BlankNode("c")

    def test_sparql_style_prefix_without_dot(self):
        g = parse_turtle("PREFIX ex: <http://x#>\nex:s ex:p ex:o .")
        assert len(g.triples) == 1

    def test_prefix_redefinition_wins(self):
        g = parse_turtle(
            "@prefix ex: <http://old#> .\n"
            "ex:a ex:p ex:b .\n"
            "@prefix ex: <http://x#> .\n"
            "ex:s ex:p ex:o .\n"
        )
        assert Triple(ex("s"), ex("p"), ex("o")) in g.triples
        assert Triple(Iri("http://old#a"), Iri("http://old#p"), Iri("http://old#b")) in g.triples
        assert g.prefixes["ex"] == EX

    def test_seed_prefixes_are_available_and_not_leaked_into(self):
        seed = {"ex": EX}
        g = parse_turtle("ex:s ex:p ex:o .", prefixes=seed)
        assert len(g.triples) == 1
        assert seed == {"ex": EX}

    def test_empty_and_whitespace_input(self):
        assert parse_turtle("") == Graph()
        assert parse_turtle("  \n# only a comment\n") == Graph()

    def test_percent_and_unicode_iris(self):
        g = parse_turtle("<http://x#%20a> <http://x#p> <http://x#café> .")
        (t,) = g.triples
        assert t.subject == Iri("http://x#%20a")
        assert t.object == Iri("http://x#café")


class TestParserErrors:
    @pytest.mark.parametrize(
        "text,fragment",
        [
            ("<http://x#s", "unterminated IRI"),
            ('<http://x#s> <http://x#p> "open .', "unterminated string"),
            ('<http://x#s> <http://x#p> "a\nb" .', "newline inside string"),
            ("<http://x#s> <http://x#p> 'single' .", "single-quoted"),
            ('<http://x#s> <http://x#p> """long""" .', "triple-quoted"),
            ("@base <http://x#> .", "@base"),
            ("BASE <http://x#>", "BASE"),
            ("<http://x#s> <http://x#p> [ ] .", "anonymous blank nodes"),
            ("<http://x#s> <http://x#p> ( ) .", "collections"),
            ("<http://x#s> <http://x#p> <http://x#o>", "expected '.'"),
            ('"lit" <http://x#p> <http://x#o> .', "expected a subject"),
            ("<http://x#s> 42 <http://x#o> .", "expected a predicate"),
            ("<http://x#s> <http://x#p> .", "expected an object"),
            ("@prefix ex <http://x#> .", "prefix label"),
            ('@prefix ex: "nope" .', "IRI reference"),
            ('<http://x#s> <http://x#p> "x"^^ .', "datatype IRI"),
            ('<http://x#s> <http://x#p> "x"@1bad .', "malformed @-word"),
            ("<http://x#s> <http://x#p> <http://x#o> ~ .", "unexpected character"),
        ],
    )
    def test_rejected_syntax(self, text, fragment):
        with pytest.raises(TurtleSyntaxError) as info:
            parse_turtle(text)
        assert fragment.lower() in str(info.value).lower()

    def test_error_carries_position(self):
        with pytest.raises(TurtleSyntaxError) as info:
            parse_turtle("@prefix ex: <http://x#> .\nex:s ex:p .")
        assert info.value.line == 2
        assert info.value.column == 11

    def test_unknown_prefix(self):
        with pytest.raises(UnknownPrefixError) as info:
            parse_turtle("ex:s ex:p ex:o .")
        assert info.value.label == "ex"

    def test_parser_never_hangs_or_crashes_unexpectedly(self):
        # Totality: any input either parses or raises a positioned error.
        from hypothesis import strategies as st

        @settings(max_examples=200, deadline=None)
        @given(st.text(max_size=80))
        def run(text):
            try:
                parse_turtle(text)
            except (TurtleSyntaxError, UnknownPrefixError):
                pass

        run()


# ---------------------------------------------------------------------------
# Serializer
# ---------------------------------------------------------------------------


GOLDEN = (
    "@prefix ex: <http://x#> .\n"
    "@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .\n"
    "\n"
    '<http://elsewhere/n> ex:p "5"^^<http://www.w3.org/2001/XMLSchema#integer> .\n'
    "\n"
    "ex:s a ex:C ;\n"
    '    ex:p "v" .\n'
    "\n"
    "ex:t ex:p ex:s .\n"
)


def golden_graph() -> Graph:
    return Graph(
        triples={
            Triple(ex("s"), Iri(RDF + "type"), ex("C")),
            Triple(ex("s"), ex("p"), Literal("v")),
            Triple(ex("t"), ex("p"), ex("s")),
            Triple(Iri("http://elsewhere/n"), ex("p"), Literal("5", datatype=XSD_INTEGER)),
        },
        prefixes={"ex": EX, "rdf": RDF},
    )


class TestSerializer:
    def test_golden_layout(self):
        assert serialize_turtle(golden_graph()) == GOLDEN

    def test_empty_graph(self):
        assert serialize_turtle(Graph()) == ""
        # Prefixes survive even when no triples follow.
        assert serialize_turtle(Graph(prefixes={"ex": EX})) == "@prefix ex: <http://x#> .\n"

    def test_insertion_order_does_not_matter(self):
        triples = sorted(golden_graph().triples, key=lambda t: term_text(t.object))
        rebuilt = Graph(triples=set(), prefixes={"ex": EX, "rdf": RDF})
        for t in triples:
            rebuilt.triples.add(t)
        assert serialize_turtle(rebuilt) == GOLDEN

    def test_rdf_type_renders_as_a_only_in_predicate_position(self):
        rdf_type = Iri(RDF + "type")
        g = Graph(
            triples={Triple(rdf_type, rdf_type, rdf_type)},
            prefixes={"rdf": RDF},
        )
        assert serialize_turtle(g) == "@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .\n\nrdf:type a rdf:type .\n"

    def test_unabbreviatable_iris_render_in_angle_brackets(self):
        g = Graph(triples={Triple(Iri("urn:x"), Iri("urn:p"), Iri("urn:o"))})
        assert serialize_turtle(g) == "<urn:x> <urn:p> <urn:o> .\n"

    def test_local_names_needing_escapes_are_not_abbreviated(self):
        # A dot or slash in the local part would not survive re-parsing as a
        # prefixed name, so such IRIs must stay in angle-bracket form.
        g = Graph(
            triples={Triple(ex("s.t"), ex("p/q"), ex("ok"))},
            prefixes={"ex": EX},
        )
        out = serialize_turtle(g)
        assert "<http://x#s.t>" in out
        assert "<http://x#p/q>" in out
        assert "ex:ok" in out
        assert parse_turtle(out) == g

    def test_output_always_ends_with_newline(self):
        g = Graph(triples={Triple(ex("s"), ex("p"), ex("o"))})
        assert serialize_turtle(g).endswith(".\n")


# ---------------------------------------------------------------------------
# Round-trip properties
# ---------------------------------------------------------------------------


class TestRoundTrip:
    @settings(max_examples=250, deadline=None)
    @given(grounded_graphs)
    def test_parse_inverts_serialize(self, graph):
        text = serialize_turtle(graph)
        back = parse_turtle(text)
        assert back.triples == graph.triples

    @settings(max_examples=250, deadline=None)
    @given(grounded_graphs)
    def test_serialization_is_a_fixed_point(self, graph):
        once = serialize_turtle(graph)
        again = serialize_turtle(parse_turtle(once))
        assert once == again

    def test_control_characters_survive(self):
        nasty = Literal("\x00\x01\x0b\x0c\x7f\b bell\x07")
        g = Graph(triples={Triple(ex("s"), ex("p"), nasty)})
        assert parse_turtle(serialize_turtle(g)) == g

    def test_unicode_survives(self):
        g = Graph(
            triples={
                Triple(Iri("http://x#café"), ex("p"), Literal("grüße \U0001F33E")),
            }
        )
        assert parse_turtle(serialize_turtle(g)) == g
