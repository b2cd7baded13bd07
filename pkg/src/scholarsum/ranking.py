"""Keyword search and impact-based ordering over a corpus snapshot.

Two impact proxies are implemented: influence (raw citation count, a stand-in
for long-term impact) and popularity (exponentially time-decayed citation
events, a stand-in for current attention). Both are deliberately simple and
fully deterministic so that every ordering can be checked against a
brute-force oracle.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .corpus import Article, CorpusSnapshot

ORDERINGS = ("popularity", "influence", "citation_count", "year", "relevance")
DEFAULT_GAMMA = 0.5  # decay rate per year for the popularity proxy

_TOKEN_RE = re.compile(r"[a-z0-9]+")


class InvalidRequest(ValueError):
    """A SearchRequest violates its own invariants."""


@dataclass(frozen=True)
class SearchRequest:
    """Query, filters, ordering, and paging for one search.

    Filters are conjunctive; the topics filter matches an article that has
    at least one of the requested topics (case-insensitive).
    """

    query: str = ""
    year_from: int | None = None
    year_to: int | None = None
    doc_types: frozenset[str] | None = None
    topics: frozenset[str] | None = None
    ordering: str = "popularity"
    limit: int = 20
    offset: int = 0

    def validate(self) -> None:
        if self.ordering not in ORDERINGS:
            raise InvalidRequest(f"unknown ordering {self.ordering!r}")
        if self.limit < 1:
            raise InvalidRequest("limit must be >= 1")
        if self.offset < 0:
            raise InvalidRequest("offset must be >= 0")
        if (
            self.year_from is not None
            and self.year_to is not None
            and self.year_from > self.year_to
        ):
            raise InvalidRequest("year_from must not exceed year_to")


@dataclass(frozen=True)
class RankedResult:
    """One hit: rank is the 1-based position in the full (unpaged) order."""

    article_id: str
    title: str
    score: float
    rank: int


def tokenize(text: str) -> list[str]:
    """Lowercased alphanumeric tokens; everything else is a separator."""
    return _TOKEN_RE.findall(text.lower())


def compute_influence(article: Article) -> float:
    """Influence proxy: total citation count."""
    return float(article.citation_count)


def compute_popularity(article: Article, now_year: int, gamma: float = DEFAULT_GAMMA) -> float:
    """Popularity proxy: citation events decayed by exp(-gamma * age).

    Falls back to citation_count averaged over the article's lifetime when
    no per-year events are recorded.
    """
    if article.citation_events is not None:
        return sum(
            count * math.exp(-gamma * (now_year - event_year))
            for event_year, count in article.citation_events
        )
    return article.citation_count / (now_year - article.year + 1)


def relevance_score(article: Article, query_terms: set[str]) -> float:
    """Title-weighted term-frequency score: 2 * tf(title) + tf(abstract)."""
    title_tokens = tokenize(article.title)
    abstract_tokens = tokenize(article.abstract)
    score = 0
    for term in query_terms:
        score += 2 * title_tokens.count(term) + abstract_tokens.count(term)
    return float(score)


def _matches_query(article: Article, query_terms: set[str]) -> bool:
    if not query_terms:
        return True
    tokens = set(tokenize(article.title)) | set(tokenize(article.abstract))
    return bool(query_terms & tokens)


def _passes_filters(article: Article, request: SearchRequest) -> bool:
    if request.year_from is not None and article.year < request.year_from:
        return False
    if request.year_to is not None and article.year > request.year_to:
        return False
    if request.doc_types is not None and article.doc_type not in request.doc_types:
        return False
    if request.topics is not None:
        wanted = {t.lower() for t in request.topics}
        if not wanted & {t.lower() for t in article.topics}:
            return False
    return True


def _ordering_key(article: Article, request: SearchRequest, now_year: int, query_terms: set[str]) -> float:
    if request.ordering == "popularity":
        return compute_popularity(article, now_year)
    if request.ordering == "influence":
        return compute_influence(article)
    if request.ordering == "citation_count":
        return float(article.citation_count)
    if request.ordering == "year":
        return float(article.year)
    return relevance_score(article, query_terms)


def search_with_total(
    snapshot: CorpusSnapshot, request: SearchRequest, now_year: int
) -> tuple[list[RankedResult], int]:
    """Like `search`, but also returns the total number of matches."""
    request.validate()
    query_terms = set(tokenize(request.query))
    candidates = [
        a
        for a in snapshot
        if _matches_query(a, query_terms) and _passes_filters(a, request)
    ]
    scored = [(a, _ordering_key(a, request, now_year, query_terms)) for a in candidates]
    # Two-pass sort: id ascending first, then a stable sort on the score.
    scored.sort(key=lambda pair: pair[0].id)
    scored.sort(key=lambda pair: pair[1], reverse=True)
    results = [
        RankedResult(article_id=a.id, title=a.title, score=score, rank=position)
        for position, (a, score) in enumerate(scored, start=1)
    ]
    page = results[request.offset : request.offset + request.limit]
    return page, len(results)


def search(snapshot: CorpusSnapshot, request: SearchRequest, now_year: int) -> list[RankedResult]:
    """Rank the articles matching `request`, paged by offset/limit.

    An article is a candidate when its title or abstract contains at least
    one query term (empty query: all articles). Candidates are ordered by
    the requested key descending, ties broken by ascending id.
    """
    page, _ = search_with_total(snapshot, request, now_year)
    return page
