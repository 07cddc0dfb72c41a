"""Bibliographic record types and the name/source normalization they rely on."""

from __future__ import annotations

import string
import unicodedata
from dataclasses import dataclass, field

YEAR_MIN = 1500
YEAR_MAX = 2100

_PUNCT_TABLE = {ord(c): " " for c in string.punctuation}


def _ascii_fold(text: str) -> str:
    return unicodedata.normalize("NFKD", text).encode("ascii", "ignore").decode("ascii")


def normalize_author_key(name: str) -> str:
    """Normalize an author name to a matching key: lowercase ASCII,
    punctuation dropped, whitespace collapsed ("Bhushan, B." -> "bhushan b")."""
    folded = _ascii_fold(name).lower().translate(_PUNCT_TABLE)
    return " ".join(folded.split())


def normalize_source_key(source: str) -> str:
    """Normalize a journal/venue string for exact-after-normalization matching."""
    folded = _ascii_fold(source).lower().translate(_PUNCT_TABLE)
    return " ".join(folded.split())


def first_author_lastname(authors: list[str]) -> str:
    """Last name of the first author, lowercased; "anon" when no authors.

    Handles both "Lastname, Initials" and the bare "Lastname Initials" shape
    used in cited-reference strings; multi-word last names survive intact.
    """
    if not authors:
        return "anon"
    name = authors[0].strip()
    if not name:
        return "anon"
    if "," in name:
        last = name.split(",", 1)[0]
    else:
        parts = name.split()
        last = " ".join(parts[:-1]) if len(parts) > 1 else parts[0]
    return " ".join(_ascii_fold(last).lower().split()) or "anon"


@dataclass(slots=True, frozen=True)
class PublicationRecord:
    """One bibliographic record from a WoS export.

    `id` is assigned at parse time, deterministic from file order. The year
    is always present and within [1500, 2100]; rows violating that are
    rejected at parse with a diagnostic.
    """

    id: str
    year: int
    authors: tuple[str, ...] = ()
    first_author_lastname: str = "anon"
    title: str = ""
    source: str = ""
    volume: str | None = None
    begin_page: str | None = None
    doi: str | None = None
    abstract: str | None = None
    author_keywords: tuple[str, ...] | None = None
    external_citation_count: int = 0
    cited_references: tuple[str, ...] = ()

    def author_key(self) -> str:
        if not self.authors:
            return ""
        return normalize_author_key(self.authors[0])

    def source_key(self) -> str:
        return normalize_source_key(self.source)


@dataclass(slots=True, frozen=True)
class CitedRef:
    """One entry of a WoS CR field, split into whatever parts were recognized.

    A ref is eligible for matching when it carries a DOI or both an author
    key and a year; anything weaker is retained but flagged unmatchable.
    """

    raw: str
    author_key: str | None = None
    year: int | None = None
    source_key: str | None = None
    volume: str | None = None
    begin_page: str | None = None
    doi: str | None = None

    @property
    def match_eligible(self) -> bool:
        return self.doi is not None or (self.author_key is not None and self.year is not None)


@dataclass(slots=True, frozen=True)
class Diagnostic:
    """Non-fatal parse problem, tied to a 1-based data row number."""

    row: int
    message: str

    def __str__(self) -> str:
        return f"row {self.row}: {self.message}"


def make_record(
    id: str,
    year: int,
    *,
    authors: list[str] | tuple[str, ...] = (),
    title: str = "",
    source: str = "",
    volume: str | None = None,
    begin_page: str | None = None,
    doi: str | None = None,
    abstract: str | None = None,
    author_keywords: list[str] | tuple[str, ...] | None = None,
    external_citation_count: int = 0,
    cited_references: list[str] | tuple[str, ...] = (),
) -> PublicationRecord:
    """Convenience constructor that derives the first-author label and
    normalizes collection fields; used by tests and synthetic builders."""
    authors = tuple(authors)
    return PublicationRecord(
        id=id,
        year=year,
        authors=authors,
        first_author_lastname=first_author_lastname(list(authors)),
        title=title,
        source=source,
        volume=volume,
        begin_page=begin_page,
        doi=doi.lower() if doi else None,
        abstract=abstract,
        author_keywords=tuple(author_keywords) if author_keywords is not None else None,
        external_citation_count=external_citation_count,
        cited_references=tuple(cited_references),
    )
