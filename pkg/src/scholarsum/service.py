"""HTTP service: search endpoints for the UI plus the summarization API.

The summarize endpoint is stateless with respect to the corpus: it
summarizes exactly the articles carried in the request body (ids, titles,
abstracts), so third parties can call it without our corpus. Search serves
abstracts back to clients precisely so they can do that.

Configuration comes from environment variables; see ServiceConfig.from_env.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Mapping

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .corpus import CorpusSnapshot, ingest
from .llm_client import (
    AuthRejected,
    BadRequestUpstream,
    LlmClient,
    LlmConfig,
    UpstreamFailed,
    UpstreamTimeout,
)
from .ranking import InvalidRequest, SearchRequest, search_with_total
from .summarizer import (
    DEFAULT_BUDGET_TOKENS,
    MAX_ARTICLES,
    SummaryArticle,
    SummaryRequest,
    build_prompt,
    load_templates,
)
from .validator import DEFAULT_FAIL_THRESHOLD, validate


@dataclass(frozen=True)
class ServiceConfig:
    """Startup configuration, normally sourced from environment variables."""

    port: int = 8000
    corpus_path: str | None = None
    budget_tokens: int = DEFAULT_BUDGET_TOKENS
    coverage_fail_threshold: float = DEFAULT_FAIL_THRESHOLD
    allowed_origin: str | None = None
    now_year: int | None = None  # fixed scoring year; None means wall clock
    llm: LlmConfig = field(default_factory=LlmConfig)

    @classmethod
    def from_env(cls, env: Mapping[str, str] = os.environ) -> "ServiceConfig":
        llm = LlmConfig(
            base_url=env.get("LLM_BASE_URL", ""),
            api_key=env.get("LLM_API_KEY", ""),
            model=env.get("LLM_MODEL", ""),
            timeout_s=float(env.get("REQUEST_TIMEOUT_S", "60")),
            retry_max=int(env.get("RETRY_MAX", "2")),
            backend=env.get("LLM_BACKEND", "mock"),
        )
        now_year = env.get("NOW_YEAR")
        return cls(
            port=int(env.get("PORT", "8000")),
            corpus_path=env.get("CORPUS_PATH") or None,
            budget_tokens=int(env.get("BUDGET_TOKENS", str(DEFAULT_BUDGET_TOKENS))),
            coverage_fail_threshold=float(
                env.get("COVERAGE_FAIL_THRESHOLD", str(DEFAULT_FAIL_THRESHOLD))
            ),
            allowed_origin=env.get("ALLOWED_ORIGIN") or None,
            now_year=int(now_year) if now_year else None,
            llm=llm,
        )


class ArticleIn(BaseModel):
    id: str
    title: str
    abstract: str = ""


class SummarizeIn(BaseModel):
    query: str = ""
    articles: list[ArticleIn]


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"code": code, "message": message})


def create_app(config: ServiceConfig | None = None, transport=None) -> FastAPI:
    """Build the application; validates templates and LLM config at startup.

    `transport` is handed to the LLM client, letting tests stub the remote
    backend without a network.
    """
    if config is None:
        config = ServiceConfig.from_env()
    config.llm.validate()
    templates = load_templates()
    llm = LlmClient(config.llm, transport=transport)

    app = FastAPI(title="scholarsum")
    app.state.config = config
    app.state.snapshot = None
    if config.corpus_path:
        app.state.snapshot = ingest(config.corpus_path)

    if config.allowed_origin:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=[config.allowed_origin],
            allow_methods=["GET", "POST"],
            allow_headers=["*"],
        )

    def reload_corpus(path: str) -> CorpusSnapshot:
        """Ingest `path` and atomically swap the served snapshot."""
        snapshot = ingest(path)
        app.state.snapshot = snapshot
        return snapshot

    app.state.reload_corpus = reload_corpus

    def _now_year() -> int:
        return config.now_year or datetime.now(timezone.utc).year

    @app.exception_handler(RequestValidationError)
    async def malformed_request(request: Request, exc: RequestValidationError):
        return _error(400, "malformed_request", "request body or parameters failed validation")

    @app.get("/health")
    def health():
        snapshot: CorpusSnapshot | None = app.state.snapshot
        body = {
            "status": "ok" if snapshot is not None else "no_corpus",
            "corpus_size": len(snapshot) if snapshot is not None else 0,
            "backend": config.llm.backend,
        }
        return JSONResponse(status_code=200 if snapshot is not None else 503, content=body)

    @app.get("/search")
    def search_endpoint(
        q: str = "",
        year_from: int | None = None,
        year_to: int | None = None,
        doc_type: list[str] | None = Query(None),
        topic: list[str] | None = Query(None),
        order: str = "popularity",
        limit: int = 20,
        offset: int = 0,
    ):
        snapshot: CorpusSnapshot | None = app.state.snapshot
        if snapshot is None:
            return _error(503, "no_corpus", "no corpus has been ingested")
        request = SearchRequest(
            query=q,
            year_from=year_from,
            year_to=year_to,
            doc_types=frozenset(doc_type) if doc_type else None,
            topics=frozenset(topic) if topic else None,
            ordering=order,
            limit=limit,
            offset=offset,
        )
        try:
            page, total = search_with_total(snapshot, request, _now_year())
        except InvalidRequest as exc:
            return _error(400, "invalid_params", str(exc))
        results = []
        for hit in page:
            article = snapshot.get(hit.article_id)
            results.append(
                {
                    "rank": hit.rank,
                    "id": article.id,
                    "title": article.title,
                    "year": article.year,
                    "doc_type": article.doc_type,
                    "topics": sorted(article.topics),
                    "score": hit.score,
                    "abstract": article.abstract,
                }
            )
        return {"total": total, "results": results}

    @app.post("/summarize")
    def summarize_endpoint(body: SummarizeIn):
        n = len(body.articles)
        if n == 0:
            return _error(400, "empty_articles", "at least one article is required")
        if n > MAX_ARTICLES:
            return _error(400, "too_many_articles", f"at most {MAX_ARTICLES} articles are allowed")
        if len({a.id for a in body.articles}) != n:
            return _error(400, "duplicate_ids", "article ids must be distinct")
        if any(not a.title.strip() for a in body.articles):
            return _error(400, "empty_title", "article titles must be non-empty")

        started = time.monotonic()
        request = SummaryRequest(
            query=body.query,
            articles=tuple(SummaryArticle(a.id, a.title, a.abstract) for a in body.articles),
        )
        bundle = build_prompt(request, config.budget_tokens, templates)
        try:
            outcome = llm.complete(bundle)
        except AuthRejected as exc:
            return _error(502, "auth_rejected", str(exc))
        except UpstreamTimeout as exc:
            return _error(504, "upstream_timeout", str(exc))
        except (UpstreamFailed, BadRequestUpstream) as exc:
            return _error(502, "upstream_failed", str(exc))
        if not outcome.text.strip():
            return _error(502, "empty_generation", "backend returned no text")

        report = validate(
            outcome.text,
            n,
            bundle.mode,
            sources=[(a.title, a.abstract) for a in body.articles],
            fail_threshold=config.coverage_fail_threshold,
        )
        return {
            "summary": outcome.text,
            "mode": bundle.mode.value,
            "references": [
                {"index": k, "id": a.id, "title": a.title}
                for k, a in enumerate(body.articles, start=1)
            ],
            "validation": report.to_dict(),
            "model_id": outcome.model_id,
            "truncation_applied": bundle.truncation_applied,
            "latency_ms": int((time.monotonic() - started) * 1000),
        }

    return app
