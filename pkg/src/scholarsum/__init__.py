"""Impact-ranked scholarly search with citation-grounded summaries.

Pipeline: ingest a line-delimited article corpus, rank search hits by an
impact aspect (popularity or influence), build a mode-appropriate prompt
for the curated top-k, generate through a chat-completions backend or the
deterministic mock, and validate the output's citations and grounding.
"""

from .corpus import Article, ArticleNotFound, CorpusSnapshot, DuplicateIdError, IngestReport, ingest
from .llm_client import GenerationOutcome, LlmClient, LlmConfig, complete, mock_generate
from .ranking import (
    RankedResult,
    SearchRequest,
    compute_influence,
    compute_popularity,
    search,
    search_with_total,
)
from .summarizer import (
    PromptBundle,
    SummaryArticle,
    SummaryMode,
    SummaryRequest,
    build_prompt,
    estimate_tokens,
    load_templates,
    select_mode,
)
from .validator import CitationOccurrence, ValidationReport, parse_citations, split_sentences, validate

__version__ = "0.1.0"

__all__ = [
    "Article",
    "ArticleNotFound",
    "CitationOccurrence",
    "CorpusSnapshot",
    "DuplicateIdError",
    "GenerationOutcome",
    "IngestReport",
    "LlmClient",
    "LlmConfig",
    "PromptBundle",
    "RankedResult",
    "SearchRequest",
    "SummaryArticle",
    "SummaryMode",
    "SummaryRequest",
    "ValidationReport",
    "build_prompt",
    "complete",
    "compute_influence",
    "compute_popularity",
    "estimate_tokens",
    "ingest",
    "load_templates",
    "mock_generate",
    "parse_citations",
    "search",
    "search_with_total",
    "select_mode",
    "split_sentences",
    "validate",
]
