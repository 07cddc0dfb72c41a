import random

import pytest

from citegraph import mark, parse_query
from citegraph.errors import QueryParseError
from citegraph.query import DEFAULT_FIELDS, TITLE_ONLY, And, Or, Term

from conftest import make_graph, random_dag


class TestParse:
    def test_field_prefix_term(self):
        q = parse_query("title:nanotri*")
        assert isinstance(q.root, Term)
        assert q.root.field == "title"
        assert q.root.pattern == "nanotri"
        assert q.root.prefix and not q.root.substring

    def test_empty_query(self):
        with pytest.raises(QueryParseError):
            parse_query("")
        with pytest.raises(QueryParseError):
            parse_query("   ")

    def test_or_of_two_prefix_terms(self):
        q = parse_query("nanotri* OR micro-tri*")
        assert isinstance(q.root, Or)
        left, right = q.root.children
        assert left.pattern == "nanotri" and left.prefix
        assert right.pattern == "micro-tri" and right.prefix

    def test_or_binds_looser_than_and(self):
        q = parse_query("a AND b OR c")
        assert isinstance(q.root, Or)
        first = q.root.children[0]
        assert isinstance(first, And)

    def test_parentheses(self):
        q = parse_query("a AND (b OR c)")
        assert isinstance(q.root, And)
        assert isinstance(q.root.children[1], Or)

    def test_quoted_phrase(self):
        q = parse_query('"nano tri"*')
        assert q.root.pattern == "nano tri"
        assert q.root.prefix

    def test_quoted_phrase_with_field(self):
        q = parse_query('abstract:"liquid droplets"')
        assert q.root.field == "abstract"
        assert q.root.pattern == "liquid droplets"

    def test_leading_star_is_substring(self):
        q = parse_query("*microtri*")
        assert q.root.substring and q.root.prefix
        assert q.root.pattern == "microtri"

    def test_dangling_operator_reports_position(self):
        with pytest.raises(QueryParseError) as exc:
            parse_query("nanotri* OR")
        assert exc.value.position == len("nanotri* OR")

    def test_leading_operator_rejected(self):
        with pytest.raises(QueryParseError):
            parse_query("OR nanotri*")

    def test_unknown_field_rejected(self):
        with pytest.raises(QueryParseError):
            parse_query("banana:split")

    def test_unbalanced_paren(self):
        with pytest.raises(QueryParseError):
            parse_query("(a OR b")

    def test_bare_star_rejected(self):
        with pytest.raises(QueryParseError):
            parse_query("*")


class TestMark:
    def graph(self):
        graph, _ = make_graph(
            {"n1": 2005, "n2": 2003, "n3": 2001},
            [],
            n1={"title": "Nanotribology of X", "authors": ["Liu, H"]},
            n2={"title": "Tribology of Y", "authors": ["Bhushan, B"]},
            n3={
                "title": "Friction formed liquid droplets",
                "abstract": "Results from nanotribology experiments.",
                "author_keywords": ["droplets", "monolayers"],
                "authors": ["Chen, L"],
            },
        )
        return graph

    def test_title_prefix(self):
        graph = self.graph()
        assert mark(graph, parse_query("title:nanotri*")) == {"n1"}

    def test_abstract_only_record(self):
        graph = self.graph()
        assert mark(graph, parse_query("title:nanotri*")) == {"n1"}
        assert mark(graph, parse_query("abstract:nanotri*")) == {"n3"}

    def test_default_fields_cover_abstract(self):
        graph = self.graph()
        assert mark(graph, parse_query("nanotri*"), DEFAULT_FIELDS) == {"n1", "n3"}
        assert mark(graph, parse_query("nanotri*"), TITLE_ONLY) == {"n1"}

    def test_no_match(self):
        assert mark(self.graph(), parse_query("quantum")) == set()

    def test_author_field_matches_each_author(self):
        graph = self.graph()
        assert mark(graph, parse_query("authors:bhushan*")) == {"n2"}

    def test_keywords_field(self):
        graph = self.graph()
        assert mark(graph, parse_query("keywords:droplets")) == {"n3"}

    def test_any_field(self):
        graph = self.graph()
        assert mark(graph, parse_query("any:chen*")) == {"n3"}

    def test_exact_token_requires_boundaries(self):
        graph = self.graph()
        # bare pattern matches whole tokens only
        assert mark(graph, parse_query("title:tribology")) == {"n2"}
        assert mark(graph, parse_query("title:*tribology")) == {"n1", "n2"}

    def test_case_insensitive(self):
        graph = self.graph()
        assert mark(graph, parse_query("TITLE:NANOTRI*")) == {"n1"}

    def test_punctuation_trimmed_from_tokens(self):
        graph, _ = make_graph(
            {"a": 2005}, [], a={"title": "Friction (and wear), revisited."}
        )
        assert mark(graph, parse_query("title:wear")) == {"a"}
        assert mark(graph, parse_query("title:revisited")) == {"a"}

    def test_phrase_match(self):
        graph = self.graph()
        assert mark(graph, parse_query('"liquid droplets"')) == {"n3"}
        assert mark(graph, parse_query('"droplets liquid"')) == set()

    def test_or_is_union_and_is_intersection(self):
        rng = random.Random(4)
        vocab = ["friction", "wear", "coating", "carbon", "films"]
        for _ in range(10):
            graph = random_dag(rng, n_min=4, n_max=8)
            titled, _ = make_graph(
                {nid: graph.year(nid) for nid in graph.ids},
                [],
                **{
                    nid: {"title": " ".join(rng.sample(vocab, k=rng.randint(1, 3)))}
                    for nid in graph.ids
                },
            )
            q1, q2 = rng.sample(vocab, k=2)
            union = mark(titled, parse_query(f"{q1} OR {q2}"))
            inter = mark(titled, parse_query(f"{q1} AND {q2}"))
            m1 = mark(titled, parse_query(q1))
            m2 = mark(titled, parse_query(q2))
            assert union == m1 | m2
            assert inter == m1 & m2
