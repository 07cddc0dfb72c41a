"""HTTP exploration service hosting drill-down sessions over one loaded network.

Each session owns an independent drill stack; mutations on a session are
serialized through a per-session lock while reads of the immutable graphs
can run concurrently. Payload field names are documented in docs/api.md and
covered by contract tests.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException, Query as QueryParam
from fastapi.responses import PlainTextResponse
from pydantic import BaseModel

from . import clustering as clustering_mod
from .cores import extract_core
from .drill import DrillSession
from .errors import CitegraphError, DrillError, QueryParseError
from .export import FORMATS, export_records
from .graph import CitationGraph
from .layout import LayoutParams, layout, select_display
from .query import DEFAULT_FIELDS, FIELDS, mark, parse_query
from .svg import cluster_color


@dataclass
class SessionState:
    drill: DrillSession
    clustering: clustering_mod.Clustering | None = None
    lock: threading.Lock = field(default_factory=threading.Lock)


class MarkRequest(BaseModel):
    query: str
    fields: list[str] | None = None


class DrillRequest(BaseModel):
    include_intermediates: bool = False


class CoresRequest(BaseModel):
    k: int = 10


class ClusterRequest(BaseModel):
    resolution: float = 0.75
    min_size: int = 10
    seed: int = 0
    restarts: int = 10


def create_app(graph: CitationGraph) -> FastAPI:
    app = FastAPI(title="citegraph service")
    sessions: dict[str, SessionState] = {}

    def get_session(token: str) -> SessionState:
        state = sessions.get(token)
        if state is None:
            raise HTTPException(status_code=404, detail=f"unknown session {token!r}")
        return state

    def network_payload(state: SessionState) -> dict:
        session = state.drill
        return {
            "nodes": len(session.graph),
            "edges": session.graph.n_edges,
            "depth": session.depth,
            "marked": len(session.marked),
            "levels": [session.level(i).description for i in range(session.depth)],
        }

    @app.post("/sessions", status_code=201)
    def create_session() -> dict:
        token = uuid.uuid4().hex
        sessions[token] = SessionState(drill=DrillSession.start(graph))
        return {"token": token, **network_payload(sessions[token])}

    @app.get("/sessions/{token}/network")
    def network(token: str) -> dict:
        return network_payload(get_session(token))

    @app.get("/sessions/{token}/stats")
    def stats(token: str, blocks: str) -> dict:
        state = get_session(token)
        parsed = []
        for chunk in blocks.split(","):
            try:
                start, end = chunk.split("-")
                parsed.append((int(start), int(end)))
            except ValueError:
                raise HTTPException(status_code=400, detail=f"bad block {chunk!r}") from None
        try:
            rows = state.drill.graph.block_stats(parsed)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return {
            "blocks": [
                {
                    "label": r.label,
                    "start_year": r.start_year,
                    "end_year": r.end_year,
                    "links": r.link_count,
                    "publications": r.publication_count,
                }
                for r in rows
            ]
        }

    @app.post("/sessions/{token}/mark")
    def mark_endpoint(token: str, body: MarkRequest) -> dict:
        state = get_session(token)
        fields = DEFAULT_FIELDS
        if body.fields is not None:
            unknown = [f for f in body.fields if f not in FIELDS]
            if unknown:
                raise HTTPException(status_code=400, detail=f"unknown fields {unknown}")
            if not body.fields:
                raise HTTPException(status_code=400, detail="fields must not be empty")
            fields = tuple(body.fields)
        try:
            query = parse_query(body.query)
        except QueryParseError as exc:
            raise HTTPException(
                status_code=400,
                detail={"message": str(exc), "position": exc.position},
            ) from exc
        with state.lock:
            marked = mark(state.drill.graph, query, fields)
            state.drill = state.drill.with_marked(marked, f"marked: {body.query}")
        return {"marked": len(marked), "ids": sorted(marked)}

    @app.post("/sessions/{token}/drill")
    def drill(token: str, body: DrillRequest) -> dict:
        state = get_session(token)
        with state.lock:
            try:
                state.drill = state.drill.drill_down(
                    set(state.drill.marked), body.include_intermediates
                )
            except DrillError as exc:
                raise HTTPException(status_code=400, detail=str(exc)) from exc
            state.clustering = None
            return network_payload(state)

    @app.post("/sessions/{token}/drillup")
    def drillup(token: str) -> dict:
        state = get_session(token)
        with state.lock:
            try:
                state.drill = state.drill.drill_up()
            except DrillError as exc:
                raise HTTPException(status_code=400, detail=str(exc)) from exc
            state.clustering = None
            return network_payload(state)

    @app.post("/sessions/{token}/cores")
    def cores(token: str, body: CoresRequest) -> dict:
        state = get_session(token)
        if body.k < 0:
            raise HTTPException(status_code=400, detail="k must be non-negative")
        with state.lock:
            core = extract_core(state.drill.graph, body.k)
            state.drill = state.drill.with_marked(set(core.members), f"core k={body.k}")
        return {"k": body.k, "members": len(core), "ids": sorted(core.members)}

    @app.post("/sessions/{token}/cluster")
    def cluster_endpoint(token: str, body: ClusterRequest) -> dict:
        state = get_session(token)
        try:
            result = clustering_mod.cluster(
                state.drill.graph,
                gamma=body.resolution,
                min_cluster_size=body.min_size,
                seed=body.seed,
                restarts=body.restarts,
            )
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        with state.lock:
            state.clustering = result
        return {
            "clusters": result.n_clusters,
            "unassigned": len(result.unassigned),
            "quality": result.quality,
            "resolution": result.resolution,
        }

    @app.get("/sessions/{token}/layout")
    def layout_endpoint(token: str, n: int = QueryParam(default=40, ge=1)) -> dict:
        state = get_session(token)
        g = state.drill.graph
        shown = select_display(g, n) if len(g) else set()
        result = layout(g, shown)
        assignment = state.clustering.assignment if state.clustering else {}
        marked = state.drill.marked
        nodes = []
        for p in result.nodes:
            rec = g.record(p.id)
            cluster = assignment.get(p.id)
            nodes.append(
                {
                    "id": p.id,
                    "label": p.label,
                    "layer": p.layer,
                    "x": p.x,
                    "year": rec.year,
                    "title": rec.title,
                    "authors": list(rec.authors),
                    "source": rec.source,
                    "internal_score": g.internal_citation_score(p.id),
                    "external_score": rec.external_citation_count,
                    "cluster": cluster,
                    "color": cluster_color(cluster) if state.clustering else None,
                    "marked": p.id in marked,
                }
            )
        return {
            "nodes": nodes,
            "edges": [list(e) for e in result.edges],
            "layer_years": list(result.layer_years),
            "stress": result.stress,
            "d_min": result.d_min,
        }

    @app.get("/sessions/{token}/export")
    def export_endpoint(
        token: str, format: str = "tsv", n: int = QueryParam(default=40, ge=1)
    ) -> PlainTextResponse:
        state = get_session(token)
        if format not in FORMATS:
            raise HTTPException(
                status_code=400,
                detail=f"unknown format {format!r}; supported: {', '.join(FORMATS)}",
            )
        g = state.drill.graph
        shown = select_display(g, n) if len(g) else set()
        result = layout(g, shown)
        try:
            payload, _ = export_records(g, result, state.clustering, format)
        except CitegraphError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        media = "text/tab-separated-values" if format == "tsv" else (
            "text/csv" if format == "csv" else "application/jsonlines"
        )
        return PlainTextResponse(content=payload.decode("utf-8"), media_type=media)

    return app
