"""Search queries for marking publications.

Grammar (documented with worked examples in docs/query-grammar.md):

    query  := orexpr
    orexpr := andexpr ("OR" andexpr)*        OR binds looser than AND
    andexpr:= term ("AND" term)*
    term   := [field ":"] pattern | "(" orexpr ")"
    field  := title | abstract | keywords | authors | any
    pattern:= bare word or "quoted phrase", with optional "*" wildcards

Matching is case-insensitive on whitespace-delimited tokens (surrounding
punctuation trimmed). A trailing "*" makes the pattern a token-prefix
match; a leading "*" makes it a plain substring match. Terms without a
field prefix search the configured default fields: factory default is
title + abstract + author keywords, with a title-only compatibility mode.
"""

from __future__ import annotations

import re
import string
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

from .errors import QueryParseError
from .graph import CitationGraph
from .records import PublicationRecord

FIELDS = ("title", "abstract", "keywords", "authors")
DEFAULT_FIELDS = ("title", "abstract", "keywords")
TITLE_ONLY = ("title",)

_FIELD_ALIASES = {
    "title": "title",
    "abstract": "abstract",
    "keywords": "keywords",
    "author_keywords": "keywords",
    "authors": "authors",
    "author": "authors",
    "any": "any",
}


@dataclass(slots=True, frozen=True)
class Term:
    field: str | None  # None = default fields; "any" = all fields
    pattern: str  # wildcard-free core
    prefix: bool  # trailing *
    substring: bool  # leading *
    position: int


@dataclass(slots=True, frozen=True)
class Or:
    children: tuple["Node", ...]


@dataclass(slots=True, frozen=True)
class And:
    children: tuple["Node", ...]


Node = Union[Term, Or, And]


@dataclass(slots=True, frozen=True)
class Query:
    root: Node
    text: str


_TOKEN_RE = re.compile(
    r"""\s*(?:
        (?P<lparen>\() |
        (?P<rparen>\)) |
        (?P<quoted>(?P<qfield>\w+:)?"(?P<qbody>[^"]*)"(?P<qstar>\*?)) |
        (?P<word>[^\s()]+)
    )""",
    re.VERBOSE,
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise QueryParseError("unrecognized input", pos)
        if m.group("lparen"):
            tokens.append(("(", "(", m.start("lparen")))
        elif m.group("rparen"):
            tokens.append((")", ")", m.start("rparen")))
        elif m.group("quoted") is not None:
            field = (m.group("qfield") or "").rstrip(":")
            body = m.group("qbody") + ("*" if m.group("qstar") else "")
            tokens.append(("phrase", f"{field}\0{body}", m.start("quoted")))
        else:
            word = m.group("word")
            upper = word.upper()
            if upper in ("OR", "AND"):
                tokens.append((upper, word, m.start("word")))
            else:
                tokens.append(("word", word, m.start("word")))
        pos = m.end()
    return tokens


def parse_query(text: str) -> Query:
    """Parse query text into an expression tree; raises QueryParseError with
    the offending position on empty input or dangling operators."""
    stripped = text.strip()
    if not stripped:
        raise QueryParseError("empty query", 0)
    tokens = _tokenize(text)
    parser = _Parser(tokens, text)
    root = parser.parse_or()
    if parser.pos < len(tokens):
        raise QueryParseError("unexpected trailing input", tokens[parser.pos][2])
    return Query(root=root, text=text)


class _Parser:
    def __init__(self, tokens, text):
        self.tokens = tokens
        self.text = text
        self.pos = 0

    def _peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def parse_or(self) -> Node:
        children = [self.parse_and()]
        while True:
            tok = self._peek()
            if tok and tok[0] == "OR":
                self.pos += 1
                children.append(self.parse_and())
            else:
                break
        return children[0] if len(children) == 1 else Or(tuple(children))

    def parse_and(self) -> Node:
        children = [self.parse_term()]
        while True:
            tok = self._peek()
            if tok and tok[0] == "AND":
                self.pos += 1
                children.append(self.parse_term())
            else:
                break
        return children[0] if len(children) == 1 else And(tuple(children))

    def parse_term(self) -> Node:
        tok = self._peek()
        if tok is None:
            end = len(self.text)
            raise QueryParseError("dangling operator: expected a term", end)
        kind, value, position = tok
        if kind in ("OR", "AND"):
            raise QueryParseError(f"dangling operator {value!r}", position)
        if kind == ")":
            raise QueryParseError("unexpected ')'", position)
        if kind == "(":
            self.pos += 1
            inner = self.parse_or()
            closing = self._peek()
            if closing is None or closing[0] != ")":
                raise QueryParseError("unbalanced '('", position)
            self.pos += 1
            return inner
        self.pos += 1
        if kind == "phrase":
            field_part, body = value.split("\0", 1)
            return self._make_term(field_part or None, body, position)
        # bare word, possibly field-prefixed
        if ":" in value:
            field_part, body = value.split(":", 1)
            return self._make_term(field_part, body, position)
        return self._make_term(None, value, position)

    def _make_term(self, field_text: str | None, body: str, position: int) -> Term:
        field = None
        if field_text is not None:
            field = _FIELD_ALIASES.get(field_text.lower())
            if field is None:
                raise QueryParseError(f"unknown field {field_text!r}", position)
        substring = body.startswith("*")
        prefix = body.endswith("*")
        core = body.strip("*").strip().strip('"').lower()
        if not core:
            raise QueryParseError("empty pattern", position)
        return Term(field=field, pattern=core, prefix=prefix, substring=substring, position=position)


# -- evaluation ---------------------------------------------------------------

_TRIM = string.punctuation


@lru_cache(maxsize=4096)
def _normalize(text: str) -> str:
    tokens = [t.strip(_TRIM) for t in text.lower().split()]
    return " ".join(t for t in tokens if t)


def _term_regex(term: Term) -> re.Pattern:
    core = re.escape(_normalize_pattern(term.pattern))
    head = "" if term.substring else r"(?:^| )"
    tail = "" if (term.prefix or term.substring) else r"(?: |$)"
    return re.compile(head + core + tail)


def _normalize_pattern(pattern: str) -> str:
    # patterns keep inner punctuation ("tribo-syst") but collapse whitespace
    return " ".join(pattern.split())


def _record_texts(rec: PublicationRecord, field: str) -> list[str]:
    if field == "title":
        return [rec.title] if rec.title else []
    if field == "abstract":
        return [rec.abstract] if rec.abstract else []
    if field == "keywords":
        return list(rec.author_keywords) if rec.author_keywords else []
    if field == "authors":
        return list(rec.authors)
    raise ValueError(f"unknown field {field}")


def _eval(node: Node, rec: PublicationRecord, default_fields: tuple[str, ...]) -> bool:
    if isinstance(node, Or):
        return any(_eval(child, rec, default_fields) for child in node.children)
    if isinstance(node, And):
        return all(_eval(child, rec, default_fields) for child in node.children)
    fields = default_fields if node.field is None else (
        FIELDS if node.field == "any" else (node.field,)
    )
    regex = _term_regex(node)
    for field in fields:
        for text in _record_texts(rec, field):
            if regex.search(_normalize(text)):
                return True
    return False


def mark(
    graph: CitationGraph,
    query: Query,
    default_fields: tuple[str, ...] = DEFAULT_FIELDS,
) -> set[str]:
    """Ids of publications the query matches. Absent optional fields never
    match; the authors field is matched per author name."""
    return {rec.id for rec in graph.records if _eval(query.root, rec, default_fields)}
