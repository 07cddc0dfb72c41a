"""Command-line pipeline: each subcommand reads/writes the native graph file
so every analysis stage is independently scriptable. All randomized stages
take --seed and outputs are byte-deterministic."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import clustering as clustering_mod
from . import export as export_mod
from . import graphio
from .cores import DEFAULT_K, extract_core
from .clustering import DEFAULT_MIN_CLUSTER_SIZE, DEFAULT_RESOLUTION, DEFAULT_RESTARTS
from .drill import DrillSession, intermediates
from .errors import CitegraphError, IngestError
from .graph import build_graph
from .layout import DEFAULT_DISPLAY, DEFAULT_ITERATIONS, LayoutParams, LayoutResult, PlacedNode, layout, select_display
from .query import DEFAULT_FIELDS, TITLE_ONLY, mark, parse_query
from .svg import render_svg
from .wos import match_references, parse_wos_file


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CitegraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="citegraph",
        description="Citation-network exploration: ingest, stats, cores, clustering, drill-down, layout, export, serve.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse a WoS export and build the citation graph")
    p.add_argument("--wos", required=True, help="WoS tab-delimited export file")
    p.add_argument("--out", required=True, help="native graph file to write")
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("stats", help="per-period publication and link counts")
    p.add_argument("--graph", required=True)
    p.add_argument("--blocks", required=True, help="e.g. 1998-2002,2003-2007,2008-2012")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("cores", help="extract core publications (k-core)")
    p.add_argument("--graph", required=True)
    p.add_argument("--k", type=int, default=DEFAULT_K)
    p.add_argument("--out", help="optionally write the core sub-network")
    p.set_defaults(func=_cmd_cores)

    p = sub.add_parser("cluster", help="cluster publications at a resolution")
    p.add_argument("--graph", required=True)
    p.add_argument("--resolution", type=float, default=DEFAULT_RESOLUTION)
    p.add_argument("--min-size", type=int, default=DEFAULT_MIN_CLUSTER_SIZE)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS)
    p.add_argument("--out", required=True, help="clustering sidecar JSON")
    p.set_defaults(func=_cmd_cluster)

    p = sub.add_parser("drill", help="mark publications by query and drill down (or --up)")
    p.add_argument("--graph", help="graph to drill (or session current view)")
    p.add_argument("--query", help="marking query")
    p.add_argument("--intermediates", action="store_true")
    p.add_argument("--title-only", action="store_true", help="search titles only")
    p.add_argument("--up", action="store_true", help="pop one drill level")
    p.add_argument("--session", help="session file keeping the drill stack")
    p.add_argument("--out", help="write the current view as a native graph file")
    p.set_defaults(func=_cmd_drill)

    p = sub.add_parser("layout", help="compute the timeline layout")
    p.add_argument("--graph", required=True)
    p.add_argument("--n", type=int, default=DEFAULT_DISPLAY, help="display the n most cited")
    p.add_argument("--clusters", help="clustering sidecar for SVG coloring")
    p.add_argument("--d-min", type=float, default=None)
    p.add_argument("--iterations", type=int, default=DEFAULT_ITERATIONS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="layout sidecar JSON")
    p.add_argument("--svg", help="also render an SVG")
    p.set_defaults(func=_cmd_layout)

    p = sub.add_parser("export", help="export displayed bibliographic records")
    p.add_argument("--graph", required=True)
    p.add_argument("--layout", required=True, help="layout sidecar JSON")
    p.add_argument("--clusters", help="clustering sidecar JSON")
    p.add_argument("--format", default="tsv", help="tsv | csv | jsonlines")
    p.add_argument("--out", help="output file (stdout when omitted)")
    p.set_defaults(func=_cmd_export)

    p = sub.add_parser("serve", help="run the HTTP exploration service")
    p.add_argument("--graph", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)

    return parser


def _cmd_ingest(args) -> int:
    path = Path(args.wos)
    if not path.exists():
        raise IngestError(f"no such file: {path}")
    records, diagnostics = parse_wos_file(path.read_bytes())
    edges, match_report = match_references(records)
    graph, report = build_graph(records, edges)
    graphio.save(graph, args.out, report)
    for diag in diagnostics:
        print(f"diagnostic: {diag}", file=sys.stderr)
    print(
        f"{len(records)} records, {graph.n_edges} edges, {report.count()} dropped "
        f"(matched {match_report.matched}, unmatched {match_report.unmatched}, "
        f"ambiguous {match_report.ambiguous})"
    )
    return 0


def _parse_blocks(text: str) -> list[tuple[int, int]]:
    blocks = []
    for chunk in text.split(","):
        try:
            start, end = chunk.split("-")
            blocks.append((int(start), int(end)))
        except ValueError:
            raise CitegraphError(f"bad block {chunk!r}; expected START-END") from None
    return blocks


def _cmd_stats(args) -> int:
    graph, _ = graphio.load(args.graph)
    stats = graph.block_stats(_parse_blocks(args.blocks))
    print("Block\tLinks\tPublications")
    for row in stats:
        print(f"{row.label}\t{row.link_count}\t{row.publication_count}")
    return 0


def _cmd_cores(args) -> int:
    graph, _ = graphio.load(args.graph)
    core = extract_core(graph, args.k)
    print(f"{len(core)} of {len(graph)} publications in {args.k}-core")
    if args.out:
        graphio.save(graph.induced_subgraph(core.members), args.out)
    return 0


def _cmd_cluster(args) -> int:
    graph, _ = graphio.load(args.graph)
    result = clustering_mod.cluster(
        graph,
        gamma=args.resolution,
        min_cluster_size=args.min_size,
        seed=args.seed,
        restarts=args.restarts,
    )
    Path(args.out).write_text(clustering_to_json(result), encoding="utf-8")
    print(
        f"{result.n_clusters} clusters, {len(result.unassigned)} unassigned, "
        f"quality {result.quality:.6f}"
    )
    return 0


def clustering_to_json(result: clustering_mod.Clustering) -> str:
    return json.dumps(
        {
            "resolution": result.resolution,
            "min_cluster_size": result.min_cluster_size,
            "seed": result.seed,
            "restarts": result.restarts,
            "quality": result.quality,
            "assignment": result.assignment,
        },
        ensure_ascii=False,
        indent=2,
    ) + "\n"


def clustering_from_json(text: str) -> clustering_mod.Clustering:
    data = json.loads(text)
    return clustering_mod.Clustering(
        resolution=data["resolution"],
        min_cluster_size=data["min_cluster_size"],
        seed=data["seed"],
        restarts=data["restarts"],
        assignment=dict(data["assignment"]),
        quality=data["quality"],
    )


def _cmd_drill(args) -> int:
    if args.up:
        if not args.session:
            raise CitegraphError("drill --up needs --session")
        session = _load_session(args.session)
        session = session.drill_up()
        _save_session(session, args.session)
        if args.out:
            graphio.save(session.graph, args.out)
        print(f"back to {len(session.graph)} publications, {session.graph.n_edges} edges (depth {session.depth})")
        return 0

    if not args.query:
        raise CitegraphError("drill needs --query (or --up)")
    if args.session and Path(args.session).exists():
        session = _load_session(args.session)
    elif args.graph:
        graph, _ = graphio.load(args.graph)
        session = DrillSession.start(graph)
    else:
        raise CitegraphError("drill needs --graph or an existing --session")

    fields = TITLE_ONLY if args.title_only else DEFAULT_FIELDS
    query = parse_query(args.query)
    marked = mark(session.graph, query, fields)
    if not marked:
        raise CitegraphError(f"query matched nothing: {args.query!r}")
    session = session.drill_down(marked, args.intermediates)
    if args.session:
        _save_session(session, args.session)
    if args.out:
        graphio.save(session.graph, args.out)
    print(
        f"marked {len(marked)}, drilled to {len(session.graph)} publications, "
        f"{session.graph.n_edges} edges (depth {session.depth})"
    )
    return 0


def _save_session(session: DrillSession, path: str) -> None:
    levels = []
    for i in range(session.depth):
        level = session.level(i)
        levels.append(
            {
                "graph": graphio.dumps(level.graph),
                "marked": sorted(level.marked),
                "description": level.description,
            }
        )
    Path(path).write_text(json.dumps({"levels": levels}, ensure_ascii=False), encoding="utf-8")


def _load_session(path: str) -> DrillSession:
    from .drill import DrillLevel

    if not Path(path).exists():
        raise CitegraphError(f"no such session file: {path}")
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    levels = tuple(
        DrillLevel(
            graph=graphio.loads(entry["graph"])[0],
            marked=frozenset(entry["marked"]),
            description=entry["description"],
        )
        for entry in data["levels"]
    )
    return DrillSession(levels)


def _cmd_layout(args) -> int:
    graph, _ = graphio.load(args.graph)
    display = select_display(graph, args.n) if len(graph) else set()
    params = LayoutParams(d_min=args.d_min, iterations=args.iterations, seed=args.seed)
    result = layout(graph, display, params)
    Path(args.out).write_text(layout_to_json(result), encoding="utf-8")
    if args.svg:
        cl = None
        if args.clusters:
            cl = clustering_from_json(Path(args.clusters).read_text(encoding="utf-8"))
        Path(args.svg).write_text(render_svg(result, cl), encoding="utf-8")
    print(
        f"layout: {len(result.nodes)} nodes, {len(result.edges)} edges, "
        f"{len(result.layer_years)} layers, stress {result.stress:.6f}"
    )
    return 0


def layout_to_json(result: LayoutResult) -> str:
    return json.dumps(
        {
            "d_min": result.d_min,
            "iterations": result.iterations,
            "seed": result.seed,
            "stress": result.stress,
            "layer_years": list(result.layer_years),
            "nodes": [
                {"id": p.id, "label": p.label, "layer": p.layer, "x": p.x}
                for p in result.nodes
            ],
            "edges": [list(e) for e in result.edges],
        },
        ensure_ascii=False,
        indent=2,
    ) + "\n"


def layout_from_json(text: str) -> LayoutResult:
    data = json.loads(text)
    return LayoutResult(
        nodes=tuple(
            PlacedNode(id=n["id"], label=n["label"], layer=n["layer"], x=n["x"])
            for n in data["nodes"]
        ),
        edges=tuple((c, d) for c, d in data["edges"]),
        layer_years=tuple(data["layer_years"]),
        d_min=data["d_min"],
        iterations=data["iterations"],
        seed=data["seed"],
        stress=data["stress"],
    )


def _cmd_export(args) -> int:
    graph, _ = graphio.load(args.graph)
    result = layout_from_json(Path(args.layout).read_text(encoding="utf-8"))
    cl = None
    if args.clusters:
        cl = clustering_from_json(Path(args.clusters).read_text(encoding="utf-8"))
    payload, warnings = export_mod.export_records(graph, result, cl, args.format)
    for warning in warnings:
        print(f"warning: {warning}", file=sys.stderr)
    if args.out:
        Path(args.out).write_bytes(payload)
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.buffer.flush()
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    graph, _ = graphio.load(args.graph)
    app = create_app(graph)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
