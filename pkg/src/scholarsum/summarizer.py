"""Summary mode selection and prompt construction.

The number of requested articles picks the mode (1-5 concise, 6-20
literature review), the mode picks the system prompt template, and the
articles become numbered document blocks in the user message. The whole
prompt is kept under a token budget by truncating abstracts evenly; titles
and the query are never touched.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import yaml

MIN_ARTICLES = 1
MAX_ARTICLES = 20
CONCISE_MAX = 5  # 1-5 articles: concise; 6-20: literature review
DEFAULT_BUDGET_TOKENS = 12_000
TRUNCATION_MARKER = " [truncated]"
RULE_FAMILIES = ("citation", "grounding", "structure", "tone")

_BOUNDARY_RE = re.compile(r"[.!?](?=\s)")


class OutOfRange(ValueError):
    """Article count outside the supported 1-20 range."""


class InvalidSummaryRequest(ValueError):
    """Duplicate ids or empty titles in a summary request."""


class TemplateError(ValueError):
    """The prompt template file is unusable."""


class SummaryMode(enum.Enum):
    CONCISE = "concise"
    LIT_REVIEW = "lit_review"


@dataclass(frozen=True)
class SummaryArticle:
    """One document to summarize; order in the request is meaningful."""

    id: str
    title: str
    abstract: str


@dataclass(frozen=True)
class SummaryRequest:
    query: str
    articles: tuple[SummaryArticle, ...]

    def validate(self) -> None:
        n = len(self.articles)
        if n < MIN_ARTICLES or n > MAX_ARTICLES:
            raise OutOfRange(f"article count must be in [{MIN_ARTICLES}, {MAX_ARTICLES}], got {n}")
        ids = [a.id for a in self.articles]
        if len(set(ids)) != len(ids):
            raise InvalidSummaryRequest("article ids must be distinct")
        if any(not a.title.strip() for a in self.articles):
            raise InvalidSummaryRequest("article titles must be non-empty")


@dataclass(frozen=True)
class PromptBundle:
    """A ready-to-send prompt: system text, user message, and accounting."""

    mode: SummaryMode
    system_prompt: str
    user_message: str
    estimated_tokens: int
    truncation_applied: bool


@dataclass(frozen=True)
class PromptTemplates:
    concise: str
    lit_review: str

    def for_mode(self, mode: SummaryMode) -> str:
        return self.concise if mode is SummaryMode.CONCISE else self.lit_review


def select_mode(n: int) -> SummaryMode:
    """Map an article count to a summary mode; 6 or more means lit review."""
    if n < MIN_ARTICLES or n > MAX_ARTICLES:
        raise OutOfRange(f"article count must be in [{MIN_ARTICLES}, {MAX_ARTICLES}], got {n}")
    return SummaryMode.CONCISE if n <= CONCISE_MAX else SummaryMode.LIT_REVIEW


def estimate_tokens(text: str) -> int:
    """Backend-agnostic token estimate: ceil(characters / 4)."""
    return (len(text) + 3) // 4


def load_templates(path: str | Path | None = None) -> PromptTemplates:
    """Load and validate the prompt template file.

    Each template must contain the marker substring of all four rule
    families (the structure marker is per mode); the markers themselves are
    declared in the file so editors can keep them in sync with rewordings.

    Raises:
        TemplateError: unreadable file, missing entries, or missing markers.
    """
    if path is None:
        raw = resources.files("scholarsum").joinpath("data/prompts.yaml").read_text("utf-8")
    else:
        raw = Path(path).read_text(encoding="utf-8")
    try:
        doc = yaml.safe_load(raw)
    except yaml.YAMLError as exc:
        raise TemplateError(f"template file is not valid YAML: {exc}") from exc
    if not isinstance(doc, dict) or "prompts" not in doc or "markers" not in doc:
        raise TemplateError("template file must define 'prompts' and 'markers'")

    prompts = doc["prompts"]
    markers = doc["markers"]
    structure = markers.get("structure") if isinstance(markers, dict) else None
    if not isinstance(structure, dict):
        raise TemplateError("markers.structure must map each mode to a substring")

    for name in ("concise", "lit-review"):
        text = prompts.get(name) if isinstance(prompts, dict) else None
        if not isinstance(text, str) or not text.strip():
            raise TemplateError(f"missing prompt template {name!r}")
        missing = []
        for family in RULE_FAMILIES:
            marker = structure.get(name) if family == "structure" else markers.get(family)
            if not isinstance(marker, str) or not marker or marker not in text:
                missing.append(family)
        if missing:
            raise TemplateError(
                f"template {name!r} is missing rule families: {', '.join(missing)}"
            )
    return PromptTemplates(concise=prompts["concise"], lit_review=prompts["lit-review"])


_default_templates: PromptTemplates | None = None


def default_templates() -> PromptTemplates:
    global _default_templates
    if _default_templates is None:
        _default_templates = load_templates()
    return _default_templates


def _one_line(text: str) -> str:
    return " ".join(text.split())


def _assemble(query: str, titles: list[str], abstracts: list[str]) -> str:
    parts = [f"User query: {query}".rstrip()]
    for k, (title, abstract) in enumerate(zip(titles, abstracts), start=1):
        block = f"[{k}] {title}"
        if abstract:
            block += f"\n{abstract}"
        parts.append(block)
    return "\n\n".join(parts)


def _truncate(abstract: str, quota_chars: int) -> str:
    """Cut to quota at the last sentence boundary, else hard, plus marker."""
    allowance = quota_chars - len(TRUNCATION_MARKER)
    if allowance <= 0:
        return ""
    boundaries = [m.end() for m in _BOUNDARY_RE.finditer(abstract) if m.end() <= allowance]
    head = abstract[: boundaries[-1]] if boundaries else abstract[:allowance]
    return head.rstrip() + TRUNCATION_MARKER


def build_prompt(
    request: SummaryRequest,
    budget_tokens: int = DEFAULT_BUDGET_TOKENS,
    templates: PromptTemplates | None = None,
) -> PromptBundle:
    """Build the system prompt and numbered-document user message.

    The user message is the query line followed by one block per article,
    block k being "[k] title" plus the abstract on the next line, in request
    order. When the estimated total exceeds the budget, the fixed overhead
    (system prompt, query, titles) is left intact and the remaining
    character budget is split equally across abstracts; each over-quota
    abstract is cut at the last sentence boundary that fits, else hard-cut,
    and marked "[truncated]".
    """
    request.validate()
    n = len(request.articles)
    if budget_tokens < 64 * n:
        raise ValueError(f"budget_tokens must be at least {64 * n} for {n} articles")
    mode = select_mode(n)
    system_prompt = (templates or default_templates()).for_mode(mode)
    system_tokens = estimate_tokens(system_prompt)

    query = _one_line(request.query)
    titles = [_one_line(a.title) for a in request.articles]
    abstracts = [_one_line(a.abstract) for a in request.articles]

    user_message = _assemble(query, titles, abstracts)
    truncated = False
    if system_tokens + estimate_tokens(user_message) > budget_tokens:
        base_len = len(_assemble(query, titles, [""] * n))
        # Each non-empty abstract costs len + 1 for its leading newline.
        spare_chars = 4 * (budget_tokens - system_tokens) - base_len
        quota_chars = max(0, spare_chars // n - 1)
        abstracts = [
            a if len(a) <= quota_chars else _truncate(a, quota_chars) for a in abstracts
        ]
        user_message = _assemble(query, titles, abstracts)
        truncated = True

    return PromptBundle(
        mode=mode,
        system_prompt=system_prompt,
        user_message=user_message,
        estimated_tokens=system_tokens + estimate_tokens(user_message),
        truncation_applied=truncated,
    )
