"""Core-publication extraction: classical k-core peeling on citation relations.

A core publication has at least k citation relations (citing or cited,
direction ignored) with other core publications. The default k of 10 is the
conventional threshold for core-literature studies.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import kernels
from .graph import CitationGraph

DEFAULT_K = 10


@dataclass(slots=True, frozen=True)
class CoreSet:
    k: int
    members: frozenset[str]

    def __len__(self) -> int:
        return len(self.members)


def extract_core(graph: CitationGraph, k: int = DEFAULT_K) -> CoreSet:
    """The unique maximal subgraph in which every node keeps undirected
    degree >= k; computed by iterative peeling, order-independent."""
    if k < 0:
        raise ValueError("k must be non-negative")
    indptr, indices = graph.undirected_csr()
    alive = kernels.kcore_mask(indptr, indices, k)
    ids = graph.ids
    return CoreSet(k=k, members=frozenset(ids[i] for i in range(len(ids)) if alive[i]))
