"""Timeline historiograph layout.

Displayed publications sit on horizontal layers, one per distinct year
(layer 0 = oldest at the top), so a citing publication is always drawn on
the same row as or below the work it cites. Horizontal coordinates minimize
the squared distance along displayed edges ("closeness"), subject to a
minimum same-layer separation d_min; coordinates land in [0, 1].

The optimizer is plain and deterministic: seeded Gauss-Seidel neighbor-mean
sweeps, each followed by a per-layer separation pass (pool-adjacent-
violators, which preserves within-layer order), and the best configuration
seen — including the initial one — wins, so stress never ends up above the
starting stress.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import LayoutError
from .graph import CitationGraph

DEFAULT_DISPLAY = 40
DEFAULT_ITERATIONS = 200


@dataclass(slots=True, frozen=True)
class LayoutParams:
    d_min: float | None = None  # None: 1 / (max layer occupancy)
    iterations: int = DEFAULT_ITERATIONS
    seed: int = 0


@dataclass(slots=True, frozen=True)
class PlacedNode:
    id: str
    label: str
    layer: int
    x: float


@dataclass(slots=True, frozen=True)
class LayoutResult:
    nodes: tuple[PlacedNode, ...]  # in display order
    edges: tuple[tuple[str, str], ...]
    layer_years: tuple[int, ...]  # ascending; index = layer
    d_min: float
    iterations: int
    seed: int
    stress: float

    def position(self, node: str) -> tuple[int, float]:
        for p in self.nodes:
            if p.id == node:
                return p.layer, p.x
        raise KeyError(node)


def display_order(graph: CitationGraph, n: int) -> list[str]:
    """The n publications shown in a visualization, most cited first.

    Ranked by internal citation score descending; ties go to the older
    publication, then the smaller id.
    """
    if n < 1:
        raise ValueError("n must be positive")
    scores = graph.internal_scores()
    ranked = sorted(
        range(len(graph)),
        key=lambda i: (-int(scores[i]), graph.records[i].year, i),
    )
    return [graph.ids[i] for i in ranked[:n]]


def select_display(graph: CitationGraph, n: int) -> set[str]:
    return set(display_order(graph, n))


def layout(
    graph: CitationGraph,
    display: set[str] | list[str],
    params: LayoutParams = LayoutParams(),
) -> LayoutResult:
    """Place the displayed publications; deterministic given its inputs."""
    shown = sorted(set(display), key=graph.index_of)
    shown_set = set(shown)
    if shown:
        order_ids = [nid for nid in display_order(graph, len(graph)) if nid in shown_set]
    else:
        order_ids = []

    years = {nid: graph.year(nid) for nid in shown}
    layer_years = tuple(sorted(set(years.values())))
    layer_of = {y: i for i, y in enumerate(layer_years)}

    layers: list[list[str]] = [[] for _ in layer_years]
    for nid in shown:  # id order within each layer
        layers[layer_of[years[nid]]].append(nid)

    max_occ = max((len(members) for members in layers), default=1)
    d_min = params.d_min if params.d_min is not None else 1.0 / max_occ
    if d_min <= 0:
        raise LayoutError("d_min must be positive")
    for li, members in enumerate(layers):
        if (len(members) - 1) * d_min > 1.0 + 1e-12:
            raise LayoutError(
                f"layer {li} (year {layer_years[li]}) holds {len(members)} nodes; "
                f"they cannot fit in [0,1] at separation {d_min}"
            )

    disp_edges = [(c, d) for c, d in graph.edges() if c in shown_set and d in shown_set]

    x: dict[str, float] = {}
    for members in layers:
        cnt = len(members)
        for i, nid in enumerate(members):
            x[nid] = 0.5 if cnt == 1 else i / (cnt - 1)

    neigh: dict[str, list[str]] = {nid: [] for nid in shown}
    for c, d in disp_edges:
        neigh[c].append(d)
        neigh[d].append(c)

    def separated(coords: dict[str, float]) -> dict[str, float]:
        out = dict(coords)
        for members in layers:
            if len(members) < 2:
                continue
            ranked = sorted(range(len(members)), key=lambda j: (coords[members[j]], j))
            ys = [coords[members[j]] - pos * d_min for pos, j in enumerate(ranked)]
            fit = _pava(ys)
            ub = max(0.0, 1.0 - (len(members) - 1) * d_min)
            for pos, j in enumerate(ranked):
                out[members[j]] = min(max(fit[pos], 0.0), ub) + pos * d_min
        return out

    def normalized(coords: dict[str, float]) -> dict[str, float]:
        if not coords:
            return {}
        lo = min(coords.values())
        hi = max(coords.values())
        if hi - lo < 1e-12:
            return {nid: 0.5 for nid in coords}
        return {nid: (v - lo) / (hi - lo) for nid, v in coords.items()}

    def stress_of(coords: dict[str, float]) -> float:
        return sum((coords[c] - coords[d]) ** 2 for c, d in disp_edges)

    x = separated(x)
    best = normalized(x)
    best_stress = stress_of(best)

    rng = random.Random(params.seed)
    sweep_order = list(shown)
    for _ in range(params.iterations):
        rng.shuffle(sweep_order)
        for nid in sweep_order:
            nbrs = neigh[nid]
            if nbrs:
                x[nid] = sum(x[u] for u in nbrs) / len(nbrs)
        x = separated(x)
        candidate = normalized(x)
        s = stress_of(candidate)
        if s < best_stress:
            best_stress = s
            best = candidate

    placed = tuple(
        PlacedNode(
            id=nid,
            label=graph.record(nid).first_author_lastname,
            layer=layer_of[years[nid]],
            x=best[nid],
        )
        for nid in order_ids
    )
    return LayoutResult(
        nodes=placed,
        edges=tuple(disp_edges),
        layer_years=layer_years,
        d_min=d_min,
        iterations=params.iterations,
        seed=params.seed,
        stress=best_stress,
    )


def _pava(values: list[float]) -> list[float]:
    """Least-squares nondecreasing fit (pool adjacent violators)."""
    blocks: list[tuple[float, int]] = []
    for v in values:
        s, c = v, 1
        while blocks and blocks[-1][0] / blocks[-1][1] > s / c:
            ps, pc = blocks.pop()
            s += ps
            c += pc
        blocks.append((s, c))
    out: list[float] = []
    for s, c in blocks:
        out.extend([s / c] * c)
    return out
