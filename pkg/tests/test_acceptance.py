"""Acceptance suite: one test per release criterion, in order.

Each criterion prints an ACCEPTANCE line (visible with `pytest -s` or `-v
-rA`) so a reviewer can see the gate at a glance. Everything runs against
the mock generation backend except the explicitly gated live smoke test.
"""

import json
import os
import random
import time
from contextlib import contextmanager
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from scholarsum.corpus import ingest
from scholarsum.llm_client import LlmClient, LlmConfig, mock_generate
from scholarsum.ranking import ORDERINGS, SearchRequest, search
from scholarsum.service import ServiceConfig, create_app
from scholarsum.summarizer import (
    DEFAULT_BUDGET_TOKENS,
    OutOfRange,
    SummaryArticle,
    SummaryMode,
    SummaryRequest,
    build_prompt,
    select_mode,
)
from scholarsum.validator import parse_citations, validate

from conftest import NOW_YEAR, TOY_CORPUS
from oracle_utils import brute_force_order, random_corpus, random_request, scan_citations

FIXTURES = Path(__file__).parent / "fixtures"


@contextmanager
def criterion(number: int, description: str):
    try:
        yield
    except Exception:
        print(f"ACCEPTANCE {number}: FAIL - {description}")
        raise
    print(f"ACCEPTANCE {number}: PASS - {description}")


def run_scenario(query: str, ordering: str, top: int, topics=None):
    snapshot = ingest(TOY_CORPUS)
    request = SearchRequest(query=query, ordering=ordering, limit=top,
                            topics=frozenset(topics) if topics else None)
    hits = search(snapshot, request, NOW_YEAR)
    articles = tuple(
        SummaryArticle(a.id, a.title, a.abstract)
        for a in (snapshot.get(h.article_id) for h in hits)
    )
    bundle = build_prompt(SummaryRequest(query=query, articles=articles))
    text = mock_generate(bundle)
    report = validate(text, len(articles), bundle.mode,
                      [(a.title, a.abstract) for a in articles])
    return articles, bundle, text, report


def test_criterion_1_mode_selection_table():
    with criterion(1, "mode selection table over n = 0..21"):
        started = time.perf_counter()
        modes = [select_mode(n) for n in range(1, 21)]
        rejected = []
        for n in (0, 21):
            try:
                select_mode(n)
            except OutOfRange:
                rejected.append(n)
        elapsed = time.perf_counter() - started
        for n, mode in zip(range(1, 21), modes):
            expected = SummaryMode.CONCISE if n <= 5 else SummaryMode.LIT_REVIEW
            assert mode is expected, f"n={n}"
        assert rejected == [0, 21]
        assert elapsed < 0.001, f"took {elapsed * 1000:.3f} ms"


def test_criterion_2_scenario_quick_gist():
    with criterion(2, "scenario replay: top-5 popularity query, concise cited summary"):
        started = time.perf_counter()
        articles, bundle, text, report = run_scenario(
            "artificial intelligence agriculture", "popularity", 5
        )
        elapsed = time.perf_counter() - started
        assert len(articles) == 5
        assert bundle.mode is SummaryMode.CONCISE
        assert report.paragraph_count == 1
        assert report.coverage == 1.0  # every sentence cited
        indices = {o.index for o in parse_citations(text)}
        assert indices <= set(range(1, 6)) and not report.out_of_range
        assert report.hard_pass
        rerun = run_scenario("artificial intelligence agriculture", "popularity", 5)
        assert rerun[2] == text  # deterministic
        assert elapsed < 1.0, f"took {elapsed:.3f} s"


def test_criterion_3_scenario_literature_review():
    with criterion(3, "scenario replay: top-10 influence query, 3-paragraph review"):
        started = time.perf_counter()
        articles, bundle, text, report = run_scenario(
            "citation ranking", "influence", 10, topics={"Artificial intelligence"}
        )
        elapsed = time.perf_counter() - started
        assert len(articles) == 10  # references list has 10 entries
        assert bundle.mode is SummaryMode.LIT_REVIEW
        assert report.paragraph_count == 3
        assert report.hard_pass
        rerun = run_scenario("citation ranking", "influence", 10,
                             topics={"Artificial intelligence"})
        assert rerun[2] == text
        assert elapsed < 1.0, f"took {elapsed:.3f} s"


def test_criterion_4_citation_parser_oracle():
    with criterion(4, "citation parser matches brute-force scan on 1000 random strings"):
        rng = random.Random(2024)
        alphabet = "0123456789[][]ab XY.!?\n-–"
        mismatches = 0
        for _ in range(1000):
            text = "".join(rng.choices(alphabet, k=rng.randint(0, 300)))
            got = [(o.index, o.char_offset) for o in parse_citations(text)]
            if got != scan_citations(text):
                mismatches += 1
        assert mismatches == 0


def test_criterion_5_ranking_oracle_and_properties():
    with criterion(5, "search equals brute-force order on 100 corpora; paging and filters hold"):
        rng = random.Random(99)
        for _ in range(100):
            snapshot = random_corpus(rng, max_articles=200)
            for ordering in ORDERINGS:
                request = random_request(rng, ordering=ordering)
                got = [r.article_id for r in search(snapshot, request, NOW_YEAR)]
                assert got == brute_force_order(snapshot, request, NOW_YEAR)

            # paging concatenation reproduces the unpaged order
            base = SearchRequest(query="", ordering="popularity", limit=250)
            full = search(snapshot, base, NOW_YEAR)
            paged, offset = [], 0
            while True:
                page = search(
                    snapshot,
                    SearchRequest(query="", ordering="popularity", limit=7, offset=offset),
                    NOW_YEAR,
                )
                if not page:
                    break
                paged.extend(page)
                offset += 7
            assert paged == full

            # adding a filter never adds results
            wide = {r.article_id for r in search(snapshot, base, NOW_YEAR)}
            narrow = {
                r.article_id
                for r in search(
                    snapshot,
                    SearchRequest(query="", ordering="popularity", limit=250, year_from=2005),
                    NOW_YEAR,
                )
            }
            assert narrow <= wide


def test_criterion_6_budget_always_respected():
    with criterion(6, "estimated tokens within budget for 500 adversarial requests"):
        rng = random.Random(4096)
        filler = "Adversarial sentence content goes here. " * 2600  # > 100k chars
        for _ in range(500):
            n = rng.randint(1, 20)
            articles = tuple(
                SummaryArticle(
                    f"id{k}",
                    f"Title number {k}",
                    filler[: min(int(10 ** rng.uniform(0, 5)), 100_000)],
                )
                for k in range(1, n + 1)
            )
            bundle = build_prompt(SummaryRequest(query="stress", articles=articles))
            assert bundle.estimated_tokens <= DEFAULT_BUDGET_TOKENS
            for k in range(1, n + 1):
                assert f"[{k}] Title number {k}" in bundle.user_message


def test_criterion_7_http_contract_fixtures():
    with criterion(7, "golden request/response fixtures reproduce"):
        app = create_app(
            ServiceConfig(corpus_path=TOY_CORPUS, now_year=NOW_YEAR,
                          llm=LlmConfig(backend="mock"))
        )
        client = TestClient(app)
        for name in ("summarize_top5.json", "summarize_too_many.json",
                     "summarize_empty.json"):
            fixture = json.loads((FIXTURES / name).read_text(encoding="utf-8"))
            response = client.post("/summarize", json=fixture["request"])
            assert response.status_code == fixture["status"], name
            body, expected = response.json(), fixture["response"]
            body.pop("latency_ms", None), expected.pop("latency_ms", None)
            assert body == expected, name
        fixture = json.loads((FIXTURES / "search_influence.json").read_text(encoding="utf-8"))
        response = client.get("/search", params=fixture["params"])
        assert response.status_code == fixture["status"]
        assert response.json() == fixture["response"]


def test_criterion_8_mock_output_always_validates():
    with criterion(8, "mock output validates with full coverage for every n in 1..20"):
        for n in range(1, 21):
            articles = tuple(
                SummaryArticle(f"id{k}", f"Study {k}",
                               f"Result {k} of the study holds. Details follow.")
                for k in range(1, n + 1)
            )
            bundle = build_prompt(SummaryRequest(query="everything", articles=articles))
            text = mock_generate(bundle)
            report = validate(text, n, bundle.mode,
                              [(a.title, a.abstract) for a in articles])
            assert report.hard_pass, f"n={n}"
            assert report.coverage == 1.0, f"n={n}"
            assert report.structure_ok, f"n={n}"


LIVE_READY = bool(os.environ.get("LLM_BASE_URL")) and bool(os.environ.get("LLM_MODEL"))


@pytest.mark.skipif(not LIVE_READY, reason="remote LLM credentials not configured")
def test_criterion_9_live_backend_smoke():
    with criterion(9, "live backend returns cited text in both modes"):
        config = LlmConfig(
            base_url=os.environ["LLM_BASE_URL"],
            api_key=os.environ.get("LLM_API_KEY", ""),
            model=os.environ["LLM_MODEL"],
            backend="remote",
        )
        snapshot = ingest(TOY_CORPUS)
        with LlmClient(config) as llm:
            for query, ordering, top in (
                ("artificial intelligence agriculture", "popularity", 3),
                ("citation ranking", "influence", 8),
            ):
                hits = search(snapshot, SearchRequest(query=query, ordering=ordering,
                                                      limit=top), NOW_YEAR)
                articles = tuple(
                    SummaryArticle(a.id, a.title, a.abstract)
                    for a in (snapshot.get(h.article_id) for h in hits)
                )
                bundle = build_prompt(SummaryRequest(query=query, articles=articles))
                outcome = llm.complete(bundle)
                assert outcome.text.strip()
                report = validate(outcome.text, len(articles), bundle.mode,
                                  [(a.title, a.abstract) for a in articles])
                assert report.out_of_range == ()
