import random

import pytest

from citegraph import extract_core

from conftest import make_graph, random_dag


def brute_force_core(graph, k):
    """Independent oracle: union of all vertex subsets whose induced
    undirected degrees are all >= k (the union is itself valid, and equals
    the unique maximum such subset)."""
    n = len(graph)
    assert n <= 12
    ids = list(graph.ids)
    adj = [0] * n
    for citing, cited in graph.edges():
        i, j = ids.index(citing), ids.index(cited)
        adj[i] |= 1 << j
        adj[j] |= 1 << i
    union = 0
    for subset in range(1 << n):
        ok = True
        s = subset
        while s:
            v = (s & -s).bit_length() - 1
            if (adj[v] & subset).bit_count() < k:
                ok = False
                break
            s &= s - 1
        if ok:
            union |= subset
    return {ids[v] for v in range(n) if union >> v & 1}


def random_order_peel(graph, k, rng):
    """Reference peeling that deletes deletable nodes in random order."""
    degree = {node: 0 for node in graph.ids}
    neighbors = {node: set() for node in graph.ids}
    for citing, cited in graph.edges():
        neighbors[citing].add(cited)
        neighbors[cited].add(citing)
        degree[citing] += 1
        degree[cited] += 1
    alive = set(graph.ids)
    while True:
        removable = [v for v in alive if degree[v] < k]
        if not removable:
            return alive
        victim = rng.choice(removable)
        alive.discard(victim)
        for u in neighbors[victim]:
            if u in alive:
                degree[u] -= 1


class TestExamples:
    def test_triangle_k2(self):
        graph, _ = make_graph(
            {"a": 2005, "b": 2003, "c": 2001},
            [("a", "b"), ("a", "c"), ("b", "c")],
        )
        assert extract_core(graph, 2).members == {"a", "b", "c"}

    def test_path_k2_empty(self):
        graph, _ = make_graph(
            {"a": 2005, "b": 2003, "c": 2001}, [("a", "b"), ("b", "c")]
        )
        assert extract_core(graph, 2).members == frozenset()

    def test_k0_keeps_everything(self):
        graph, _ = make_graph({"a": 2005, "b": 2003, "c": 2001}, [("a", "b")])
        assert extract_core(graph, 0).members == {"a", "b", "c"}

    def test_negative_k_rejected(self):
        graph, _ = make_graph({"a": 2005}, [])
        with pytest.raises(ValueError):
            extract_core(graph, -1)


class TestProperties:
    def test_oracle_equivalence_small(self):
        rng = random.Random(2024)
        for _ in range(40):
            graph = random_dag(rng, n_max=10)
            for k in (1, 2, 3):
                assert extract_core(graph, k).members == brute_force_core(graph, k)

    def test_order_independence(self):
        rng = random.Random(99)
        for _ in range(20):
            graph = random_dag(rng, n_max=10)
            expect = extract_core(graph, 2).members
            for _ in range(10):
                assert random_order_peel(graph, 2, rng) == expect

    def test_monotone_in_k(self):
        rng = random.Random(17)
        for _ in range(20):
            graph = random_dag(rng)
            prev = set(graph.ids)
            for k in range(0, 6):
                members = set(extract_core(graph, k).members)
                assert members <= prev
                prev = members

    def test_componentwise(self):
        rng = random.Random(31)
        for _ in range(10):
            graph = random_dag(rng)
            whole = extract_core(graph, 2).members
            for comp in graph.connected_components():
                sub = graph.induced_subgraph(comp)
                assert extract_core(sub, 2).members == whole & comp
