"""Post-hoc checks on generated summaries.

The prompt asks the model for cited, grounded, well-structured text; this
module measures whether the output actually complies. Out-of-range
citations and low citation coverage are hard failures (they fabricate or
omit provenance); structural and grounding findings are warnings, since
real model output legitimately varies in transitions and phrasing.

A "claim" is approximated by a sentence throughout.
"""

from __future__ import annotations

import re
from bisect import bisect_right
from dataclasses import dataclass

from .summarizer import SummaryMode

DEFAULT_FAIL_THRESHOLD = 0.6
DEFAULT_GROUNDING_THRESHOLD = 0.3
MIN_CONTENT_WORD_LEN = 4

_PARAGRAPH_RE = re.compile(r"\n\s*\n")
_SENTENCE_END_RE = re.compile(r"[.!?](?=\s|$)")
_CITATION_RE = re.compile(r"\[([0-9]+)\]")
_WORD_RE = re.compile(r"[a-z0-9]+")


class InvalidArgs(ValueError):
    """validate() called with n < 1, empty text, or misaligned sources."""


@dataclass(frozen=True)
class CitationOccurrence:
    """One "[k]" in the text, located by character offset and sentence."""

    index: int
    char_offset: int
    sentence_ordinal: int


@dataclass(frozen=True)
class ValidationReport:
    hard_pass: bool
    out_of_range: tuple[int, ...]
    sentence_count: int
    cited_sentence_count: int
    coverage: float
    unused_sources: tuple[int, ...]
    paragraph_count: int
    structure_ok: bool
    grounding_warnings: tuple[tuple[int, float], ...]  # (sentence ordinal, overlap)

    def to_dict(self) -> dict:
        return {
            "hard_pass": self.hard_pass,
            "out_of_range": list(self.out_of_range),
            "sentence_count": self.sentence_count,
            "cited_sentence_count": self.cited_sentence_count,
            "coverage": self.coverage,
            "unused_sources": list(self.unused_sources),
            "paragraph_count": self.paragraph_count,
            "structure_ok": self.structure_ok,
            "grounding_warnings": [
                {"sentence": ordinal, "overlap": overlap}
                for ordinal, overlap in self.grounding_warnings
            ],
        }


def _paragraph_spans(text: str) -> list[tuple[int, int]]:
    spans: list[tuple[int, int]] = []
    start = 0
    for sep in _PARAGRAPH_RE.finditer(text):
        spans.append((start, sep.start()))
        start = sep.end()
    spans.append((start, len(text)))
    return spans


def _trim(text: str, start: int, end: int) -> tuple[int, int]:
    while start < end and text[start].isspace():
        start += 1
    while end > start and text[end - 1].isspace():
        end -= 1
    return start, end


def _sentence_spans(text: str) -> list[tuple[int, int]]:
    """Spans of non-empty sentences, trimmed of surrounding whitespace."""
    spans: list[tuple[int, int]] = []
    for p_start, p_end in _paragraph_spans(text):
        paragraph = text[p_start:p_end]
        seg_start = 0
        for m in _SENTENCE_END_RE.finditer(paragraph):
            spans.append((p_start + seg_start, p_start + m.end()))
            seg_start = m.end()
        if seg_start < len(paragraph):
            spans.append((p_start + seg_start, p_end))
    trimmed = [_trim(text, s, e) for s, e in spans]
    return [(s, e) for s, e in trimmed if s < e]


def split_sentences(text: str) -> list[str]:
    """Split at ".", "!", "?" followed by whitespace or end of text.

    Delimiters stay with their sentence; blank lines also end a sentence;
    whitespace-only segments are dropped.
    """
    return [text[s:e] for s, e in _sentence_spans(text)]


def parse_citations(text: str) -> list[CitationOccurrence]:
    """All "[k]" tokens in text order; k is a plain unsigned decimal.

    Brackets around anything else (spaces, signs, non-digits) are ignored.
    Range checking is validate()'s job, so out-of-range indices are
    reported as-is.
    """
    spans = _sentence_spans(text)
    starts = [s for s, _ in spans]
    occurrences = []
    for m in _CITATION_RE.finditer(text):
        ordinal = bisect_right(starts, m.start()) - 1
        occurrences.append(
            CitationOccurrence(
                index=int(m.group(1)),
                char_offset=m.start(),
                sentence_ordinal=max(ordinal, 0),
            )
        )
    return occurrences


def count_paragraphs(text: str) -> int:
    """Number of blank-line-separated non-empty paragraphs."""
    return sum(1 for p in _PARAGRAPH_RE.split(text) if p.strip())


def _content_words(sentence: str) -> list[str]:
    without_citations = _CITATION_RE.sub(" ", sentence)
    return [
        w
        for w in _WORD_RE.findall(without_citations.lower())
        if len(w) >= MIN_CONTENT_WORD_LEN
    ]


def validate(
    text: str,
    n: int,
    mode: SummaryMode,
    sources: list[tuple[str, str]],
    fail_threshold: float = DEFAULT_FAIL_THRESHOLD,
    grounding_threshold: float = DEFAULT_GROUNDING_THRESHOLD,
) -> ValidationReport:
    """Check a generated summary against the prompt contract.

    Hard rules: every cited index must be in [1, n] and the fraction of
    sentences carrying at least one valid citation must reach
    fail_threshold. Structure (one paragraph for concise, 3-4 for lit
    review), uncited sources, and the lexical grounding heuristic are
    reported but never fail the text.

    Args:
        text: generated summary.
        n: number of source documents the prompt carried.
        mode: summary mode the prompt was built for.
        sources: (title, abstract) per document, aligned with prompt numbering.
        fail_threshold: minimum citation coverage for hard_pass.
        grounding_threshold: minimum lexical overlap before a sentence is
            flagged as possibly ungrounded.
    """
    if n < 1:
        raise InvalidArgs("n must be >= 1")
    if not text.strip():
        raise InvalidArgs("text must be non-empty")
    if len(sources) != n:
        raise InvalidArgs(f"expected {n} sources, got {len(sources)}")

    spans = _sentence_spans(text)
    sentence_count = len(spans)
    occurrences = parse_citations(text)
    valid = [o for o in occurrences if 1 <= o.index <= n]
    out_of_range = sorted({o.index for o in occurrences} - set(range(1, n + 1)))
    cited_sentence_count = len({o.sentence_ordinal for o in valid})
    coverage = cited_sentence_count / sentence_count
    unused_sources = sorted(set(range(1, n + 1)) - {o.index for o in valid})

    paragraph_count = count_paragraphs(text)
    if mode is SummaryMode.CONCISE:
        structure_ok = paragraph_count == 1
    else:
        structure_ok = 3 <= paragraph_count <= 4

    source_words = [
        set(_WORD_RE.findall(f"{title} {abstract}".lower())) for title, abstract in sources
    ]
    cited_by_sentence: dict[int, set[int]] = {}
    for o in valid:
        cited_by_sentence.setdefault(o.sentence_ordinal, set()).add(o.index)
    grounding_warnings = []
    for ordinal, (s, e) in enumerate(spans):
        words = _content_words(text[s:e])
        if not words:
            continue
        known: set[str] = set()
        for index in cited_by_sentence.get(ordinal, ()):
            known |= source_words[index - 1]
        overlap = sum(1 for w in words if w in known) / len(words)
        if overlap < grounding_threshold:
            grounding_warnings.append((ordinal, overlap))

    return ValidationReport(
        hard_pass=not out_of_range and coverage >= fail_threshold,
        out_of_range=tuple(out_of_range),
        sentence_count=sentence_count,
        cited_sentence_count=cited_sentence_count,
        coverage=coverage,
        unused_sources=tuple(unused_sources),
        paragraph_count=paragraph_count,
        structure_ok=structure_ok,
        grounding_warnings=tuple(grounding_warnings),
    )
