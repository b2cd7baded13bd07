"""Corpus ingest and lookup.

Articles live in a line-delimited UTF-8 file, one JSON object per line.
`ingest` validates every record, rejects bad ones individually, and returns
an immutable snapshot that the rest of the system reads from. Re-ingesting
produces a fresh snapshot; snapshots are never mutated in place.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from types import MappingProxyType
from typing import Iterator, Mapping

DOC_TYPES = ("publication", "dataset", "software", "other")


class CorpusError(Exception):
    """Base class for corpus failures."""


class FileUnreadable(CorpusError):
    """The corpus file does not exist or cannot be read."""


class DuplicateIdError(CorpusError):
    """Two records share an id; the whole ingest is aborted."""

    def __init__(self, article_id: str, line: int):
        super().__init__(f"duplicate id {article_id!r} at line {line}")
        self.article_id = article_id
        self.line = line


class ArticleNotFound(CorpusError):
    """Lookup of an id that is not in the snapshot."""

    def __init__(self, article_id: str):
        super().__init__(f"no article with id {article_id!r}")
        self.article_id = article_id


class _BadRecord(Exception):
    """Internal: per-record rejection with a human-readable reason."""


@dataclass(frozen=True)
class Article:
    """One corpus record.

    citation_events, when present, is a tuple of (year, count) pairs giving
    citations received per year; event years are never before the
    publication year.
    """

    id: str
    title: str
    abstract: str
    year: int
    doc_type: str
    topics: frozenset[str]
    citation_count: int
    citation_events: tuple[tuple[int, int], ...] | None = None


@dataclass(frozen=True)
class IngestReport:
    """Accounting for one ingest run: accepted + rejected = total lines."""

    total_lines: int
    accepted: int
    rejected: int
    rejections: tuple[tuple[int, str], ...]  # (1-based line, reason)
    empty_abstract_ids: tuple[str, ...]  # accepted but flagged


@dataclass(frozen=True)
class CorpusSnapshot:
    """Immutable, id-keyed view of the accepted articles of one ingest."""

    articles: Mapping[str, Article]
    ingest_report: IngestReport

    def get(self, article_id: str) -> Article:
        """Return the article for `article_id`, raising ArticleNotFound."""
        try:
            return self.articles[article_id]
        except KeyError:
            raise ArticleNotFound(article_id) from None

    def __len__(self) -> int:
        return len(self.articles)

    def __iter__(self) -> Iterator[Article]:
        return iter(self.articles.values())


def _require_str(record: dict, key: str, allow_empty: bool = False) -> str:
    value = record.get(key)
    if value is None:
        raise _BadRecord(f"missing {key}")
    if not isinstance(value, str):
        raise _BadRecord(f"{key} must be a string")
    if not value.strip() and not allow_empty:
        raise _BadRecord(f"missing {key}")
    return value


def _require_int(record: dict, key: str) -> int:
    value = record.get(key)
    if value is None:
        raise _BadRecord(f"missing {key}")
    if isinstance(value, bool) or not isinstance(value, int):
        raise _BadRecord(f"{key} must be an integer")
    return value


def _parse_events(record: dict, pub_year: int) -> tuple[tuple[int, int], ...] | None:
    raw = record.get("citation_events")
    if raw is None:
        return None
    if not isinstance(raw, list):
        raise _BadRecord("citation_events must be a list of [year, count] pairs")
    events: list[tuple[int, int]] = []
    for pair in raw:
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise _BadRecord("citation_events must be a list of [year, count] pairs")
        year, count = pair
        if isinstance(year, bool) or not isinstance(year, int):
            raise _BadRecord("citation_events year must be an integer")
        if isinstance(count, bool) or not isinstance(count, int) or count < 0:
            raise _BadRecord("citation_events count must be a non-negative integer")
        if year < pub_year:
            raise _BadRecord(f"citation_events year {year} precedes publication year {pub_year}")
        events.append((year, count))
    return tuple(events)


def _parse_record(record: dict) -> Article:
    article_id = _require_str(record, "id")
    title = _require_str(record, "title")
    abstract = _require_str(record, "abstract", allow_empty=True)
    year = _require_int(record, "year")
    doc_type = _require_str(record, "doc_type")
    if doc_type not in DOC_TYPES:
        raise _BadRecord(f"invalid doc_type {doc_type!r}")
    raw_topics = record.get("topics")
    if not isinstance(raw_topics, list) or not all(isinstance(t, str) for t in raw_topics):
        raise _BadRecord("missing topics" if raw_topics is None else "topics must be a list of strings")
    citation_count = _require_int(record, "citation_count")
    if citation_count < 0:
        raise _BadRecord("citation_count must be non-negative")
    return Article(
        id=article_id,
        title=title,
        abstract=abstract,
        year=year,
        doc_type=doc_type,
        topics=frozenset(raw_topics),
        citation_count=citation_count,
        citation_events=_parse_events(record, year),
    )


def ingest(path: str | Path) -> CorpusSnapshot:
    """Read a corpus file and return a snapshot of every valid record.

    Invalid records are rejected individually and listed in the report with
    their line number and reason; unknown keys are ignored. A duplicate id
    anywhere in the file (even on an otherwise-rejected record) aborts the
    whole ingest, since a silent overwrite would corrupt later references.

    Raises:
        FileUnreadable: path missing or not readable as UTF-8.
        DuplicateIdError: the same id appears on two lines.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise FileUnreadable(f"cannot read corpus file {path}: {exc}") from exc

    articles: dict[str, Article] = {}
    rejections: list[tuple[int, str]] = []
    empty_abstracts: list[str] = []
    seen_ids: dict[str, int] = {}
    lines = text.splitlines()

    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            rejections.append((line_no, "empty line"))
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            rejections.append((line_no, f"malformed record: {exc.msg}"))
            continue
        if not isinstance(record, dict):
            rejections.append((line_no, "record is not an object"))
            continue

        raw_id = record.get("id")
        if isinstance(raw_id, str) and raw_id.strip():
            if raw_id in seen_ids:
                raise DuplicateIdError(raw_id, line_no)
            seen_ids[raw_id] = line_no

        try:
            article = _parse_record(record)
        except _BadRecord as exc:
            rejections.append((line_no, str(exc)))
            continue

        articles[article.id] = article
        if not article.abstract.strip():
            empty_abstracts.append(article.id)

    report = IngestReport(
        total_lines=len(lines),
        accepted=len(articles),
        rejected=len(rejections),
        rejections=tuple(rejections),
        empty_abstract_ids=tuple(empty_abstracts),
    )
    return CorpusSnapshot(articles=MappingProxyType(articles), ingest_report=report)
