"""Native graph file (.cng): the text serialization used between pipeline stages.

Layout (described in docs/native-format.md):

    #CNG 1
    #RECORDS <n>          n compact JSON lines, one record each, fixed key order
    #EDGES <m>            m lines "citing<TAB>cited", canonical (citing, cited) order
    #DROPPED <d>          d compact JSON lines {"citing","cited","reason"}

Serialization is canonical, so load followed by save reproduces the input
byte for byte.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import IO

from .errors import GraphFileError
from .graph import BuildReport, CitationGraph, DroppedEdge, build_graph
from .records import PublicationRecord

MAGIC = "#CNG 1"

_RECORD_KEYS = (
    "id",
    "year",
    "authors",
    "first_author_lastname",
    "title",
    "source",
    "volume",
    "begin_page",
    "doi",
    "abstract",
    "author_keywords",
    "external_citation_count",
    "cited_references",
)


def _record_to_json(rec: PublicationRecord) -> str:
    payload = {
        "id": rec.id,
        "year": rec.year,
        "authors": list(rec.authors),
        "first_author_lastname": rec.first_author_lastname,
        "title": rec.title,
        "source": rec.source,
        "volume": rec.volume,
        "begin_page": rec.begin_page,
        "doi": rec.doi,
        "abstract": rec.abstract,
        "author_keywords": list(rec.author_keywords) if rec.author_keywords is not None else None,
        "external_citation_count": rec.external_citation_count,
        "cited_references": list(rec.cited_references),
    }
    return json.dumps(payload, ensure_ascii=False, separators=(",", ":"))


def _record_from_json(line: str, lineno: int) -> PublicationRecord:
    try:
        data = json.loads(line)
    except json.JSONDecodeError as exc:
        raise GraphFileError(f"line {lineno}: bad record JSON: {exc}") from exc
    missing = [k for k in _RECORD_KEYS if k not in data]
    if missing:
        raise GraphFileError(f"line {lineno}: record missing keys {missing}")
    return PublicationRecord(
        id=data["id"],
        year=data["year"],
        authors=tuple(data["authors"]),
        first_author_lastname=data["first_author_lastname"],
        title=data["title"],
        source=data["source"],
        volume=data["volume"],
        begin_page=data["begin_page"],
        doi=data["doi"],
        abstract=data["abstract"],
        author_keywords=tuple(data["author_keywords"]) if data["author_keywords"] is not None else None,
        external_citation_count=data["external_citation_count"],
        cited_references=tuple(data["cited_references"]),
    )


def dumps(graph: CitationGraph, report: BuildReport | None = None) -> str:
    report = report or BuildReport()
    out = [MAGIC, f"#RECORDS {len(graph)}"]
    out.extend(_record_to_json(rec) for rec in graph.records)
    edges = graph.edges()
    out.append(f"#EDGES {len(edges)}")
    out.extend(f"{citing}\t{cited}" for citing, cited in edges)
    out.append(f"#DROPPED {len(report.dropped)}")
    out.extend(
        json.dumps(
            {"citing": d.citing, "cited": d.cited, "reason": d.reason},
            ensure_ascii=False,
            separators=(",", ":"),
        )
        for d in report.dropped
    )
    return "\n".join(out) + "\n"


def loads(text: str) -> tuple[CitationGraph, BuildReport]:
    lines = text.splitlines()
    if not lines or lines[0] != MAGIC:
        raise GraphFileError(f"not a native graph file (expected leading {MAGIC!r})")
    pos = 1

    def section(tag: str) -> int:
        nonlocal pos
        if pos >= len(lines) or not lines[pos].startswith(f"#{tag} "):
            raise GraphFileError(f"line {pos + 1}: expected #{tag} header")
        try:
            count = int(lines[pos].split(" ", 1)[1])
        except ValueError as exc:
            raise GraphFileError(f"line {pos + 1}: bad #{tag} count") from exc
        pos += 1
        if pos + count > len(lines):
            raise GraphFileError(f"#{tag} section truncated")
        return count

    n = section("RECORDS")
    records = [_record_from_json(lines[pos + i], pos + i + 1) for i in range(n)]
    pos += n

    m = section("EDGES")
    edges = []
    for i in range(m):
        parts = lines[pos + i].split("\t")
        if len(parts) != 2:
            raise GraphFileError(f"line {pos + i + 1}: edge line must be citing<TAB>cited")
        edges.append((parts[0], parts[1]))
    pos += m

    d = section("DROPPED")
    dropped = []
    for i in range(d):
        try:
            obj = json.loads(lines[pos + i])
            dropped.append(DroppedEdge(obj["citing"], obj["cited"], obj["reason"]))
        except (json.JSONDecodeError, KeyError) as exc:
            raise GraphFileError(f"line {pos + i + 1}: bad dropped-edge entry") from exc

    graph, build_rep = build_graph(records, edges)
    if build_rep.dropped:
        raise GraphFileError("graph file contains edges violating graph invariants")
    return graph, BuildReport(tuple(dropped))


def save(graph: CitationGraph, path: str | Path, report: BuildReport | None = None) -> None:
    Path(path).write_text(dumps(graph, report), encoding="utf-8")


def load(path: str | Path) -> tuple[CitationGraph, BuildReport]:
    p = Path(path)
    if not p.exists():
        raise GraphFileError(f"no such graph file: {p}")
    return loads(p.read_text(encoding="utf-8"))
