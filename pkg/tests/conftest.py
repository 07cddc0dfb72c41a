from __future__ import annotations

import random
from pathlib import Path

import pytest

from citegraph import build_graph, make_record

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def wos_fixture_path() -> Path:
    return FIXTURES / "wos_small.txt"


@pytest.fixture(scope="session")
def wos_fixture_bytes(wos_fixture_path) -> bytes:
    return wos_fixture_path.read_bytes()


@pytest.fixture()
def fixture_graph(wos_fixture_bytes):
    from citegraph import match_references, parse_wos_file

    records, _ = parse_wos_file(wos_fixture_bytes)
    edges, _ = match_references(records)
    graph, report = build_graph(records, edges)
    return graph, report


def make_graph(years: dict[str, int], edges: list[tuple[str, str]], **record_kw):
    """Small synthetic citation graph; per-node extra record kwargs allowed
    via record_kw[node] = {...}."""
    records = [
        make_record(node, year, **record_kw.get(node, {})) for node, year in years.items()
    ]
    return build_graph(records, edges)


def random_dag(rng: random.Random, n_min: int = 2, n_max: int = 12, p: float = 0.35):
    """Seeded random DAG whose ids sort in year order, so every generated
    edge (newer -> older) is valid and survives the build unchanged."""
    n = rng.randint(n_min, n_max)
    years = sorted(rng.randint(1998, 2012) for _ in range(n))
    ids = [f"n{i:02d}" for i in range(n)]
    records = [make_record(ids[i], years[i]) for i in range(n)]
    edges = [
        (ids[j], ids[i]) for i in range(n) for j in range(i + 1, n) if rng.random() < p
    ]
    graph, report = build_graph(records, edges)
    assert not report.dropped
    return graph
