"""Marked-set drill-down with intermediate publications and an undoable stack."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DrillError
from .graph import CitationGraph


def intermediates(graph: CitationGraph, marked: set[str]) -> set[str]:
    """Unmarked publications lying on a directed citation path between two
    marked publications.

    Computed as (forward-reachable from marked) intersected with
    (backward-reachable from marked), minus the marked set itself; on an
    acyclic graph this is exactly the set of path interiors.
    """
    for node in marked:
        graph.index_of(node)
    if not marked:
        return set()
    forward = graph.predecessors(marked)  # citing -> cited direction
    backward = graph.successors(marked)
    return (forward & backward) - marked


@dataclass(slots=True, frozen=True)
class DrillLevel:
    graph: CitationGraph
    marked: frozenset[str]
    description: str


class DrillSession:
    """Stack of progressively narrower views; the bottom level is the full
    network. Sessions are immutable: drill_down/drill_up return new sessions
    sharing levels, which makes undo trivial and concurrent reads safe."""

    def __init__(self, levels: tuple[DrillLevel, ...]):
        if not levels:
            raise DrillError("a session needs at least the full-network level")
        self._levels = levels

    @classmethod
    def start(cls, graph: CitationGraph) -> "DrillSession":
        return cls((DrillLevel(graph, frozenset(), "full network"),))

    @property
    def depth(self) -> int:
        return len(self._levels)

    @property
    def current(self) -> DrillLevel:
        return self._levels[-1]

    @property
    def graph(self) -> CitationGraph:
        return self._levels[-1].graph

    @property
    def marked(self) -> frozenset[str]:
        return self._levels[-1].marked

    def level(self, i: int) -> DrillLevel:
        return self._levels[i]

    def with_marked(self, marked: set[str], description: str | None = None) -> "DrillSession":
        """Replace the current level's marked set (query results, core sets)."""
        top = self.current
        for node in marked:
            top.graph.index_of(node)
        new_top = DrillLevel(
            top.graph, frozenset(marked), description or top.description
        )
        return DrillSession(self._levels[:-1] + (new_top,))

    def drill_down(self, marked: set[str], include_intermediates: bool) -> "DrillSession":
        """Push the induced sub-network on the marked publications, optionally
        widened by their intermediates. The marked ids stay marked in the new
        view."""
        if not marked:
            raise DrillError("cannot drill down on an empty marked set")
        g = self.graph
        for node in marked:
            g.index_of(node)
        keep = set(marked)
        if include_intermediates:
            keep |= intermediates(g, set(marked))
        sub = g.induced_subgraph(keep)
        description = f"drill: {len(marked)} marked" + (
            " + intermediates" if include_intermediates else ""
        )
        level = DrillLevel(sub, frozenset(marked), description)
        return DrillSession(self._levels + (level,))

    def drill_up(self) -> "DrillSession":
        if len(self._levels) < 2:
            raise DrillError("already at full network")
        return DrillSession(self._levels[:-1])
