"""Parsing of Web of Science tab-delimited exports and cited-reference matching.

The export format (documented in docs/wos-format.md): first line is a header
of tab-separated two-letter field tags, each following line is one record.
Multi-valued cells (AU, DE, CR) use "; " between values. Encoding is UTF-8
with an optional BOM.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import IO, Iterable

from .errors import IngestError
from .records import (
    YEAR_MAX,
    YEAR_MIN,
    CitedRef,
    Diagnostic,
    PublicationRecord,
    first_author_lastname,
    normalize_author_key,
    normalize_source_key,
)

# Field tags the toolkit consumes; unknown columns are tolerated and ignored.
PARSED_TAGS = ("AU", "TI", "SO", "PY", "VL", "BP", "DI", "AB", "DE", "TC", "CR")

_LIST_SEP = "; "
_DOI_RE = re.compile(r"\bDOI\s+(.+)$", re.IGNORECASE)
_YEAR_RE = re.compile(r"^\d{4}$")


@dataclass(slots=True)
class IngestOptions:
    encoding: str = "utf-8-sig"


@dataclass(slots=True)
class MatchReport:
    """Outcome counts for one reference-matching run."""

    matched: int = 0
    unmatched: int = 0
    ambiguous: int = 0
    unmatchable: int = 0
    self_suppressed: int = 0
    duplicates: int = 0

    @property
    def total(self) -> int:
        return (
            self.matched
            + self.unmatched
            + self.ambiguous
            + self.unmatchable
            + self.self_suppressed
            + self.duplicates
        )


def _split_list(cell: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in cell.split(";") if part.strip())


def _decode(content: bytes | str | IO, encoding: str) -> str:
    if isinstance(content, str):
        return content
    if isinstance(content, bytes):
        try:
            return content.decode(encoding)
        except UnicodeDecodeError as exc:
            raise IngestError(f"undecodable input: {exc}") from exc
    try:
        data = content.read()
    except OSError as exc:
        raise IngestError(f"unreadable stream: {exc}") from exc
    if isinstance(data, bytes):
        try:
            return data.decode(encoding)
        except UnicodeDecodeError as exc:
            raise IngestError(f"undecodable input: {exc}") from exc
    return data


def parse_wos_file(
    content: bytes | str | IO,
    options: IngestOptions | None = None,
) -> tuple[list[PublicationRecord], list[Diagnostic]]:
    """Parse a WoS tab-delimited export into publication records.

    Returns the records in file order plus diagnostics for skipped rows.
    Record ids are assigned from the 1-based data row number, zero-padded so
    lexicographic id order equals file order. Malformed rows (bad year, more
    cells than header columns) are skipped with a diagnostic; a missing or
    unusable header is fatal.
    """
    opts = options or IngestOptions()
    text = _decode(content, opts.encoding)
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise IngestError("missing header row")

    header = [tag.strip() for tag in lines[0].split("\t")]
    if not any(tag in header for tag in ("PY", "TI", "AU")):
        raise IngestError("header row carries no recognized WoS field tags")
    col = {tag: i for i, tag in enumerate(header)}

    data_lines = [(i + 1, line) for i, line in enumerate(lines[1:]) if line.strip()]
    width = len(str(len(data_lines))) if data_lines else 1

    records: list[PublicationRecord] = []
    diagnostics: list[Diagnostic] = []
    for row, line in data_lines:
        cells = line.split("\t")
        if len(cells) > len(header):
            diagnostics.append(Diagnostic(row, "column count exceeds header"))
            continue
        cells += [""] * (len(header) - len(cells))

        def cell(tag: str) -> str:
            idx = col.get(tag)
            return cells[idx].strip() if idx is not None else ""

        raw_year = cell("PY")
        try:
            year = int(raw_year)
        except ValueError:
            diagnostics.append(Diagnostic(row, f"invalid year {raw_year!r}"))
            continue
        if not YEAR_MIN <= year <= YEAR_MAX:
            diagnostics.append(Diagnostic(row, f"invalid year {raw_year!r} (out of range)"))
            continue

        raw_tc = cell("TC")
        citation_count = 0
        if raw_tc:
            try:
                citation_count = int(raw_tc)
            except ValueError:
                diagnostics.append(Diagnostic(row, f"unparseable TC {raw_tc!r}, using 0"))
            if citation_count < 0:
                diagnostics.append(Diagnostic(row, f"negative TC {raw_tc!r}, using 0"))
                citation_count = 0

        authors = _split_list(cell("AU"))
        keywords_cell = cell("DE")
        doi = cell("DI").lower() or None
        records.append(
            PublicationRecord(
                id=f"r{row:0{width}d}",
                year=year,
                authors=authors,
                first_author_lastname=first_author_lastname(list(authors)),
                title=cell("TI"),
                source=cell("SO"),
                volume=cell("VL") or None,
                begin_page=cell("BP") or None,
                doi=doi,
                abstract=cell("AB") or None,
                author_keywords=_split_list(keywords_cell) if keywords_cell else None,
                external_citation_count=citation_count,
                cited_references=_split_list(cell("CR")),
            )
        )

    seen_dois: dict[str, str] = {}
    for rec in records:
        if rec.doi:
            if rec.doi in seen_dois:
                diagnostics.append(
                    Diagnostic(
                        int(rec.id[1:]),
                        f"duplicate DOI {rec.doi} (also on {seen_dois[rec.doi]}); kept both",
                    )
                )
            else:
                seen_dois[rec.doi] = rec.id
    return records, diagnostics


def parse_cited_reference(raw: str) -> CitedRef:
    """Split one CR entry ("Author, Year, Source, Vvol, Ppage, DOI doi") into
    its recognizable parts. Total: unrecognized segments are simply ignored."""
    raw = raw.strip()
    if not raw:
        return CitedRef(raw="")

    doi = None
    rest = raw
    doi_match = _DOI_RE.search(raw)
    if doi_match:
        doi = doi_match.group(1).strip().rstrip(";,").lower() or None
        rest = raw[: doi_match.start()].rstrip().rstrip(",")

    author_key = None
    year = None
    source_key = None
    volume = None
    begin_page = None
    segments = [seg.strip() for seg in rest.split(",")]
    plain: list[str] = []
    for seg in segments:
        if not seg:
            continue
        if _YEAR_RE.match(seg) and year is None and YEAR_MIN <= int(seg) <= YEAR_MAX:
            year = int(seg)
        elif len(seg) > 1 and seg[0] == "V" and seg[1:].isdigit() and volume is None:
            volume = seg[1:]
        elif len(seg) > 1 and seg[0] == "P" and seg[1:].isalnum() and seg[1].isdigit() and begin_page is None:
            begin_page = seg[1:]
        else:
            plain.append(seg)

    # First plain segment before the year is the author, the one after it the
    # abbreviated source title.
    if plain:
        key = normalize_author_key(plain[0])
        author_key = key or None
    if len(plain) > 1:
        key = normalize_source_key(plain[1])
        source_key = key or None

    return CitedRef(
        raw=raw,
        author_key=author_key,
        year=year,
        source_key=source_key,
        volume=volume,
        begin_page=begin_page,
        doi=doi,
    )


def match_references(
    records: list[PublicationRecord],
) -> tuple[list[tuple[str, str]], MatchReport]:
    """Resolve each record's cited references against the record set.

    Tiered policy: DOI exact (lowercased) first; else the triple
    (author_key, year, source_key); else the pair (author_key, year) when it
    is unique in the set. A tier with two or more candidates makes the
    reference ambiguous: no edge, counted. Self-matches are suppressed and
    duplicate edges deduplicated.
    """
    by_doi: dict[str, list[str]] = {}
    by_triple: dict[tuple[str, int, str], list[str]] = {}
    by_pair: dict[tuple[str, int], list[str]] = {}
    for rec in records:
        if rec.doi:
            by_doi.setdefault(rec.doi, []).append(rec.id)
        key = rec.author_key()
        if key:
            if rec.source_key():
                by_triple.setdefault((key, rec.year, rec.source_key()), []).append(rec.id)
            by_pair.setdefault((key, rec.year), []).append(rec.id)

    report = MatchReport()
    edges: list[tuple[str, str]] = []
    seen: set[tuple[str, str]] = set()
    for rec in records:
        for raw in rec.cited_references:
            ref = parse_cited_reference(raw)
            if not ref.match_eligible:
                report.unmatchable += 1
                continue
            target = _resolve(ref, by_doi, by_triple, by_pair, report)
            if target is None:
                continue
            if target == rec.id:
                report.self_suppressed += 1
                continue
            edge = (rec.id, target)
            if edge in seen:
                report.duplicates += 1
                continue
            seen.add(edge)
            edges.append(edge)
            report.matched += 1
    return edges, report


def _resolve(
    ref: CitedRef,
    by_doi: dict[str, list[str]],
    by_triple: dict[tuple[str, int, str], list[str]],
    by_pair: dict[tuple[str, int], list[str]],
    report: MatchReport,
) -> str | None:
    if ref.doi is not None:
        candidates = by_doi.get(ref.doi, [])
        if len(candidates) == 1:
            return candidates[0]
        if len(candidates) > 1:
            report.ambiguous += 1
            return None
    if ref.author_key is not None and ref.year is not None:
        if ref.source_key is not None:
            candidates = by_triple.get((ref.author_key, ref.year, ref.source_key), [])
            if len(candidates) == 1:
                return candidates[0]
            if len(candidates) > 1:
                report.ambiguous += 1
                return None
        candidates = by_pair.get((ref.author_key, ref.year), [])
        if len(candidates) == 1:
            return candidates[0]
        if len(candidates) > 1:
            report.ambiguous += 1
            return None
    report.unmatched += 1
    return None
