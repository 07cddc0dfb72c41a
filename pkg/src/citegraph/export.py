"""Export of the bibliographic records behind a visualized network.

Every row carries the full bibliographic identity plus both citation scores
and the position in the map, i.e. strictly more than what a hover panel
shows. Column order is fixed:

    authors; title; source; year; internal_citation_score;
    external_citation_score; cluster; x; layer
"""

from __future__ import annotations

import csv
import io
import json

from .clustering import UNASSIGNED, Clustering
from .errors import ExportError
from .graph import CitationGraph
from .layout import LayoutResult

COLUMNS = (
    "authors",
    "title",
    "source",
    "year",
    "internal_citation_score",
    "external_citation_score",
    "cluster",
    "x",
    "layer",
)

FORMATS = ("tsv", "csv", "jsonlines")


def _fmt_real(x: float) -> str:
    # 6 decimal digits, round-half-even (Python's default float formatting)
    return f"{x:.6f}"


def export_records(
    view: CitationGraph,
    layout_result: LayoutResult,
    clustering: Clustering | None,
    fmt: str,
) -> tuple[bytes, list[str]]:
    """Serialize the displayed rows; returns (payload, warnings).

    Row order is the display order of the layout. A missing clustering
    yields empty cluster cells plus a warning rather than an error.
    """
    if fmt not in FORMATS:
        raise ExportError(f"unknown format {fmt!r}; supported: {', '.join(FORMATS)}")
    warnings: list[str] = []
    if clustering is None:
        warnings.append("no clustering computed; cluster column left empty")
    assignment = clustering.assignment if clustering is not None else {}

    rows = []
    for placed in layout_result.nodes:
        rec = view.record(placed.id)
        if clustering is None:
            cluster_cell: object = ""
        else:
            c = assignment.get(placed.id, UNASSIGNED)
            cluster_cell = "unassigned" if c == UNASSIGNED else c
        rows.append(
            {
                "authors": list(rec.authors),
                "title": rec.title,
                "source": rec.source,
                "year": rec.year,
                "internal_citation_score": view.internal_citation_score(placed.id),
                "external_citation_score": rec.external_citation_count,
                "cluster": cluster_cell,
                "x": placed.x,
                "layer": placed.layer,
            }
        )

    if fmt == "jsonlines":
        lines = [
            json.dumps(
                {**row, "x": float(_fmt_real(row["x"]))},
                ensure_ascii=False,
                separators=(",", ":"),
            )
            for row in rows
        ]
        return ("\n".join([json.dumps(list(COLUMNS))] + lines) + "\n").encode("utf-8"), warnings

    def cells(row: dict) -> list[str]:
        return [
            "; ".join(row["authors"]),
            row["title"],
            row["source"],
            str(row["year"]),
            str(row["internal_citation_score"]),
            str(row["external_citation_score"]),
            str(row["cluster"]),
            _fmt_real(row["x"]),
            str(row["layer"]),
        ]

    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(COLUMNS)
        for row in rows:
            writer.writerow(cells(row))
        return buf.getvalue().encode("utf-8"), warnings

    # tsv: tabs and newlines inside fields are replaced by spaces
    def clean(cell: str) -> str:
        return cell.replace("\t", " ").replace("\n", " ")

    lines = ["\t".join(COLUMNS)]
    for row in rows:
        lines.append("\t".join(clean(c) for c in cells(row)))
    return ("\n".join(lines) + "\n").encode("utf-8"), warnings
