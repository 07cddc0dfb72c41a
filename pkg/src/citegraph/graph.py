"""Immutable acyclic citation graph and its read-only analyses.

Edges run citing -> cited. Build enforces: no self-loops, no duplicates,
year(citing) >= year(cited), acyclicity (same-year cycles broken
deterministically). All analyses treat the graph as read-only; drill-down
produces new graph values, so concurrent reads are safe.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import GraphBuildError, UnknownNodeError
from .records import PublicationRecord


@dataclass(slots=True, frozen=True)
class DroppedEdge:
    citing: str
    cited: str
    reason: str


@dataclass(slots=True, frozen=True)
class BuildReport:
    """Every edge dropped at build, with its reason, in detection order."""

    dropped: tuple[DroppedEdge, ...] = ()

    def count(self, reason: str | None = None) -> int:
        if reason is None:
            return len(self.dropped)
        return sum(1 for d in self.dropped if d.reason == reason)


@dataclass(slots=True, frozen=True)
class BlockRow:
    label: str
    start_year: int
    end_year: int
    publication_count: int
    link_count: int


@dataclass(slots=True, frozen=True)
class BlockStats:
    rows: tuple[BlockRow, ...]

    def __iter__(self):
        return iter(self.rows)


class CitationGraph:
    """Acyclic directed citation graph over publication records.

    Nodes are kept sorted by id, so lexicographic id order doubles as the
    canonical node order used for deterministic tie-breaking everywhere.
    Instances are immutable; use :func:`build_graph` to construct one.
    """

    def __init__(
        self,
        records: tuple[PublicationRecord, ...],
        src: np.ndarray,
        dst: np.ndarray,
    ):
        self._records = records
        self._ids = tuple(r.id for r in records)
        self._index = {rid: i for i, rid in enumerate(self._ids)}
        self._years = np.array([r.year for r in records], dtype=np.int32)
        self._src = src
        self._dst = dst

    # -- basic accessors ----------------------------------------------------

    @property
    def ids(self) -> tuple[str, ...]:
        return self._ids

    @property
    def records(self) -> tuple[PublicationRecord, ...]:
        return self._records

    def __len__(self) -> int:
        return len(self._ids)

    def __contains__(self, node: str) -> bool:
        return node in self._index

    @property
    def n_edges(self) -> int:
        return int(self._src.size)

    def record(self, node: str) -> PublicationRecord:
        return self._records[self._require(node)]

    def year(self, node: str) -> int:
        return int(self._years[self._require(node)])

    def edges(self) -> list[tuple[str, str]]:
        ids = self._ids
        return [(ids[s], ids[d]) for s, d in zip(self._src.tolist(), self._dst.tolist())]

    def _require(self, node: str) -> int:
        idx = self._index.get(node)
        if idx is None:
            raise UnknownNodeError(f"unknown publication id {node!r}")
        return idx

    def index_of(self, node: str) -> int:
        return self._require(node)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CitationGraph):
            return NotImplemented
        return (
            self._records == other._records
            and np.array_equal(self._src, other._src)
            and np.array_equal(self._dst, other._dst)
        )

    def __hash__(self):
        return hash((self._ids, self.n_edges))

    # -- adjacency (cached, read-only) --------------------------------------

    @cached_property
    def _out_csr(self) -> tuple[np.ndarray, np.ndarray]:
        return _csr(len(self), self._src, self._dst)

    @cached_property
    def _in_csr(self) -> tuple[np.ndarray, np.ndarray]:
        return _csr(len(self), self._dst, self._src)

    @cached_property
    def _und_csr(self) -> tuple[np.ndarray, np.ndarray]:
        both_src = np.concatenate([self._src, self._dst])
        both_dst = np.concatenate([self._dst, self._src])
        return _csr(len(self), both_src, both_dst)

    def undirected_csr(self) -> tuple[np.ndarray, np.ndarray]:
        """CSR adjacency of the undirected relation graph (each citation
        relation counted once per endpoint)."""
        return self._und_csr

    def edge_index_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Edge endpoints as dense node indices (citing, cited); read-only."""
        return self._src, self._dst

    @cached_property
    def _in_degree(self) -> np.ndarray:
        return np.bincount(self._dst, minlength=len(self)).astype(np.int64)

    # -- scores --------------------------------------------------------------

    def internal_citation_score(self, node: str) -> int:
        """Citations received from inside this graph (in-degree)."""
        return int(self._in_degree[self._require(node)])

    def external_citation_score(self, node: str) -> int:
        """The record's database-wide citation count (WoS TC field)."""
        return self._records[self._require(node)].external_citation_count

    def internal_scores(self) -> np.ndarray:
        return self._in_degree

    # -- reachability ---------------------------------------------------------

    def predecessors(self, seeds: Iterable[str], max_depth: int | None = None) -> set[str]:
        """Nodes reachable from the seeds along citing->cited edges, i.e. the
        earlier work the seeds build on; the seeds themselves are excluded."""
        return self._reach(seeds, self._out_csr, max_depth)

    def successors(self, seeds: Iterable[str], max_depth: int | None = None) -> set[str]:
        """Nodes that cite the seeds, directly or transitively (reverse
        reachability); the seeds themselves are excluded."""
        return self._reach(seeds, self._in_csr, max_depth)

    def _reach(self, seeds, csr, max_depth):
        if max_depth is not None and max_depth < 1:
            raise ValueError("max_depth must be positive or None")
        seed_idx = np.array(sorted(self._require(s) for s in seeds), dtype=np.int64)
        indptr, indices = csr
        visited = np.zeros(len(self), dtype=bool)
        visited[seed_idx] = True
        frontier = seed_idx
        found = []
        depth = 0
        while frontier.size and (max_depth is None or depth < max_depth):
            neighbors = _gather(indptr, indices, frontier)
            neighbors = np.unique(neighbors[~visited[neighbors]])
            visited[neighbors] = True
            found.append(neighbors)
            frontier = neighbors
            depth += 1
        if not found:
            return set()
        ids = self._ids
        return {ids[i] for i in np.concatenate(found).tolist()}

    # -- components ------------------------------------------------------------

    def connected_components(self) -> list[set[str]]:
        """Weakly connected components, numbered by smallest contained id."""
        n = len(self)
        indptr, indices = self._und_csr
        comp = np.full(n, -1, dtype=np.int64)
        n_comp = 0
        for start in range(n):
            if comp[start] >= 0:
                continue
            comp[start] = n_comp
            stack = [start]
            while stack:
                v = stack.pop()
                for u in indices[indptr[v] : indptr[v + 1]].tolist():
                    if comp[u] < 0:
                        comp[u] = n_comp
                        stack.append(u)
            n_comp += 1
        groups: list[set[str]] = [set() for _ in range(n_comp)]
        for i, c in enumerate(comp.tolist()):
            groups[c].add(self._ids[i])
        return groups

    # -- period statistics -------------------------------------------------------

    def block_stats(self, blocks: Sequence[tuple[int, int]]) -> BlockStats:
        """Per-period publication and intra-block link counts.

        Blocks must be disjoint and ascending. A link counts in a block only
        when both endpoints' years fall inside it; cross-block links count
        in no block.
        """
        prev_end = None
        for start, end in blocks:
            if start > end:
                raise ValueError(f"block {start}-{end} has start after end")
            if prev_end is not None and start <= prev_end:
                raise ValueError(f"blocks overlap or are out of order at {start}-{end}")
            prev_end = end
        years = self._years
        sy = years[self._src]
        dy = years[self._dst]
        rows = []
        for start, end in blocks:
            pubs = int(np.count_nonzero((years >= start) & (years <= end)))
            links = int(np.count_nonzero((sy >= start) & (sy <= end) & (dy >= start) & (dy <= end)))
            rows.append(BlockRow(f"{start}-{end}", start, end, pubs, links))
        return BlockStats(tuple(rows))

    # -- derived graphs --------------------------------------------------------

    def induced_subgraph(self, keep: Iterable[str]) -> "CitationGraph":
        """Subgraph on the given nodes with every edge whose endpoints survive."""
        keep_idx = sorted(self._require(node) for node in set(keep))
        mask = np.zeros(len(self), dtype=bool)
        mask[keep_idx] = True
        remap = np.cumsum(mask) - 1
        emask = mask[self._src] & mask[self._dst]
        records = tuple(self._records[i] for i in keep_idx)
        return CitationGraph(
            records,
            remap[self._src[emask]].astype(np.int32),
            remap[self._dst[emask]].astype(np.int32),
        )


def _csr(n: int, src: np.ndarray, dst: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    order = np.lexsort((dst, src))
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
    return indptr, dst[order].astype(np.int32)


def _gather(indptr: np.ndarray, indices: np.ndarray, nodes: np.ndarray) -> np.ndarray:
    """All CSR neighbors of `nodes`, concatenated (vectorized row gather)."""
    starts = indptr[nodes]
    counts = indptr[nodes + 1] - starts
    total = int(counts.sum())
    if total == 0:
        return np.empty(0, dtype=indices.dtype)
    offsets = np.repeat(starts - np.concatenate(([0], np.cumsum(counts)[:-1])), counts)
    return indices[offsets + np.arange(total)]


def build_graph(
    records: Sequence[PublicationRecord],
    edges: Sequence[tuple[str, str]],
) -> tuple[CitationGraph, BuildReport]:
    """Assemble a CitationGraph, enforcing its invariants.

    Self-loops, duplicate edges, and edges whose citing year precedes the
    cited year are dropped and reported. Same-year cycles are broken by
    repeatedly removing the cycle edge with the lexicographically smallest
    (citing id, cited id) pair. An edge referencing an unknown id is fatal.
    """
    recs = tuple(sorted(records, key=lambda r: r.id))
    for i in range(1, len(recs)):
        if recs[i].id == recs[i - 1].id:
            raise GraphBuildError(f"duplicate record id {recs[i].id!r}")
    index = {r.id: i for i, r in enumerate(recs)}
    years = np.array([r.year for r in recs], dtype=np.int32)

    dropped: list[DroppedEdge] = []
    src_list: list[int] = []
    dst_list: list[int] = []
    for citing, cited in edges:
        si = index.get(citing)
        di = index.get(cited)
        if si is None or di is None:
            missing = citing if si is None else cited
            raise GraphBuildError(f"edge references unknown id {missing!r}")
        src_list.append(si)
        dst_list.append(di)

    src = np.array(src_list, dtype=np.int64)
    dst = np.array(dst_list, dtype=np.int64)
    ids = tuple(r.id for r in recs)

    def drop(mask: np.ndarray, reason: str) -> None:
        for s, d in zip(src[mask].tolist(), dst[mask].tolist()):
            dropped.append(DroppedEdge(ids[s], ids[d], reason))

    if src.size:
        self_mask = src == dst
        drop(self_mask, "self-loop")
        src, dst = src[~self_mask], dst[~self_mask]
    if src.size:
        bad_year = years[src] < years[dst]
        drop(bad_year, "year order violation")
        src, dst = src[~bad_year], dst[~bad_year]
    if src.size:
        key = src * len(recs) + dst
        first = np.zeros(key.size, dtype=bool)
        first[np.unique(key, return_index=True)[1]] = True
        drop(~first, "duplicate")
        src, dst = src[first], dst[first]

    src, dst = _break_same_year_cycles(ids, years, src, dst, dropped)

    order = np.lexsort((dst, src))
    graph = CitationGraph(recs, src[order].astype(np.int32), dst[order].astype(np.int32))
    return graph, BuildReport(tuple(dropped))


def _break_same_year_cycles(ids, years, src, dst, dropped) -> tuple[np.ndarray, np.ndarray]:
    # Only same-year edges can participate in cycles once year ordering holds.
    same = years[src] == years[dst]
    if not same.any():
        return src, dst
    sy_edges = set(zip(src[same].tolist(), dst[same].tolist()))
    removed: set[tuple[int, int]] = set()
    while True:
        adj: dict[int, list[int]] = {}
        for s, d in sorted(sy_edges):
            adj.setdefault(s, []).append(d)
            adj.setdefault(d, [])
        scc_of = _tarjan_scc(adj)
        sizes = _scc_sizes(scc_of)
        cyc = [
            (s, d)
            for (s, d) in sy_edges
            if scc_of[s] == scc_of[d] and sizes[scc_of[s]] > 1
        ]
        if not cyc:
            break
        victim = min(cyc, key=lambda e: (ids[e[0]], ids[e[1]]))
        sy_edges.discard(victim)
        removed.add(victim)
        dropped.append(DroppedEdge(ids[victim[0]], ids[victim[1]], "same-year cycle"))
    if not removed:
        return src, dst
    keep = np.array(
        [(s, d) not in removed for s, d in zip(src.tolist(), dst.tolist())],
        dtype=bool,
    )
    return src[keep], dst[keep]


def _scc_sizes(scc_of: dict[int, int]) -> dict[int, int]:
    sizes: dict[int, int] = {}
    for c in scc_of.values():
        sizes[c] = sizes.get(c, 0) + 1
    return sizes


def _tarjan_scc(adj: dict[int, list[int]]) -> dict[int, int]:
    """Iterative Tarjan; returns node -> SCC id (ids arbitrary but stable)."""
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    scc_of: dict[int, int] = {}
    counter = 0
    n_scc = 0
    for root in sorted(adj):
        if root in index:
            continue
        work: list[tuple[int, int]] = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack.add(v)
            advanced = False
            children = adj[v]
            while pi < len(children):
                w = children[pi]
                pi += 1
                if w not in index:
                    work[-1] = (v, pi)
                    work.append((w, 0))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    scc_of[w] = n_scc
                    if w == v:
                        break
                n_scc += 1
    return scc_of
