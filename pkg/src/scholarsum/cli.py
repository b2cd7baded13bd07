"""Operator command line: ingest, search, summarize, serve.

Summaries go to stdout so they can be piped or copied; diagnostics and
validation warnings go to stderr. Exit codes: 0 success, 1 pipeline or
validation hard failure, 2 usage error.

Flags override the same environment variables the service reads.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import replace
from datetime import datetime, timezone

from .corpus import CorpusError, CorpusSnapshot, ingest
from .llm_client import LlmClient, LlmError
from .ranking import InvalidRequest, SearchRequest, search
from .service import ServiceConfig, create_app
from .summarizer import MAX_ARTICLES, SummaryArticle, SummaryRequest, build_prompt
from .validator import validate


def _add_corpus_arg(parser: argparse.ArgumentParser, config: ServiceConfig) -> None:
    parser.add_argument(
        "--corpus",
        default=config.corpus_path,
        help="corpus file, one JSON record per line (default: $CORPUS_PATH)",
    )


def _add_filter_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--order", default="popularity",
                        help="popularity | influence | citation_count | year | relevance")
    parser.add_argument("--year-from", type=int, default=None)
    parser.add_argument("--year-to", type=int, default=None)
    parser.add_argument("--doc-type", action="append", default=None, metavar="TYPE")
    parser.add_argument("--topic", action="append", default=None, metavar="TOPIC")
    parser.add_argument("--now-year", type=int, default=None,
                        help="scoring year for popularity decay (default: current year)")


def _build_parser(config: ServiceConfig) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scholarsum",
        description="Search a local article corpus and produce cited summaries.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="validate a corpus file and print the report")
    _add_corpus_arg(p_ingest, config)
    p_ingest.add_argument("--validate-only", action="store_true",
                          help="exit 1 when any record was rejected")

    p_search = sub.add_parser("search", help="print ranked search results")
    _add_corpus_arg(p_search, config)
    p_search.add_argument("--query", default="")
    p_search.add_argument("--limit", type=int, default=20)
    p_search.add_argument("--offset", type=int, default=0)
    _add_filter_args(p_search)

    p_sum = sub.add_parser("summarize", help="search, then summarize the top results")
    _add_corpus_arg(p_sum, config)
    p_sum.add_argument("--query", default="")
    p_sum.add_argument("--top", type=int, default=5,
                       help=f"number of top results to summarize (1-{MAX_ARTICLES})")
    p_sum.add_argument("--mock-llm", action="store_true",
                       help="use the deterministic built-in generator")
    p_sum.add_argument("--json", action="store_true", dest="as_json",
                       help="emit the summarize response as JSON")
    _add_filter_args(p_sum)

    p_serve = sub.add_parser("serve", help="start the HTTP service")
    _add_corpus_arg(p_serve, config)
    p_serve.add_argument("--port", type=int, default=config.port)

    return parser


def _require_corpus(parser: argparse.ArgumentParser, path: str | None) -> str:
    if not path:
        parser.error("--corpus is required (or set CORPUS_PATH)")
    return path


def _now_year(args: argparse.Namespace, config: ServiceConfig) -> int:
    if args.now_year is not None:
        return args.now_year
    return config.now_year or datetime.now(timezone.utc).year


def _search_request(args: argparse.Namespace, limit: int) -> SearchRequest:
    return SearchRequest(
        query=args.query,
        year_from=args.year_from,
        year_to=args.year_to,
        doc_types=frozenset(args.doc_type) if args.doc_type else None,
        topics=frozenset(args.topic) if args.topic else None,
        ordering=args.order,
        limit=limit,
        offset=getattr(args, "offset", 0),
    )


def _cmd_ingest(args: argparse.Namespace) -> int:
    snapshot = ingest(args.corpus)
    report = snapshot.ingest_report
    print(f"accepted={report.accepted} rejected={report.rejected} total={report.total_lines}")
    for line_no, reason in report.rejections:
        print(f"line {line_no}: {reason}")
    if report.empty_abstract_ids:
        print("empty abstracts: " + ", ".join(report.empty_abstract_ids))
    if args.validate_only and report.rejected:
        return 1
    return 0


def _cmd_search(args: argparse.Namespace, config: ServiceConfig) -> int:
    snapshot = ingest(args.corpus)
    results = search(snapshot, _search_request(args, args.limit), _now_year(args, config))
    for hit in results:
        print(f"{hit.rank}\t{hit.score:.4f}\t{hit.article_id}\t{hit.title}")
    return 0


def _summarize_pipeline(args: argparse.Namespace, config: ServiceConfig) -> int:
    snapshot: CorpusSnapshot = ingest(args.corpus)
    hits = search(snapshot, _search_request(args, args.top), _now_year(args, config))
    if not hits:
        print("no results to summarize", file=sys.stderr)
        return 1
    articles = tuple(
        SummaryArticle(a.id, a.title, a.abstract)
        for a in (snapshot.get(hit.article_id) for hit in hits)
    )
    request = SummaryRequest(query=args.query, articles=articles)
    bundle = build_prompt(request, config.budget_tokens)

    llm_config = replace(config.llm, backend="mock") if args.mock_llm else config.llm
    with LlmClient(llm_config) as llm:
        outcome = llm.complete(bundle)

    report = validate(
        outcome.text,
        len(articles),
        bundle.mode,
        sources=[(a.title, a.abstract) for a in articles],
        fail_threshold=config.coverage_fail_threshold,
    )

    if args.as_json:
        payload = {
            "summary": outcome.text,
            "mode": bundle.mode.value,
            "references": [
                {"index": k, "id": a.id, "title": a.title}
                for k, a in enumerate(articles, start=1)
            ],
            "validation": report.to_dict(),
            "model_id": outcome.model_id,
            "truncation_applied": bundle.truncation_applied,
            "latency_ms": outcome.latency_ms,
        }
        print(json.dumps(payload, indent=2))
    else:
        print(outcome.text)
        print()
        print("References:")
        for k, a in enumerate(articles, start=1):
            print(f"[{k}] {a.title} ({a.id})")

    if not report.structure_ok:
        print(f"warning: structure check failed (paragraphs={report.paragraph_count})",
              file=sys.stderr)
    for ordinal, overlap in report.grounding_warnings:
        print(f"warning: sentence {ordinal} weakly grounded (overlap={overlap:.2f})",
              file=sys.stderr)
    if not report.hard_pass:
        print(
            "error: validation hard failure "
            f"(coverage={report.coverage:.2f}, out_of_range={list(report.out_of_range)})",
            file=sys.stderr,
        )
        return 1
    return 0


def _cmd_serve(args: argparse.Namespace, config: ServiceConfig) -> int:
    import uvicorn

    config = replace(config, corpus_path=args.corpus, port=args.port)
    uvicorn.run(create_app(config), host="0.0.0.0", port=config.port)
    return 0


def main(argv: list[str] | None = None) -> int:
    config = ServiceConfig.from_env()
    parser = _build_parser(config)
    args = parser.parse_args(argv)

    if args.command != "serve":
        _require_corpus(parser, args.corpus)
    if args.command == "summarize" and not 1 <= args.top <= MAX_ARTICLES:
        parser.error(f"--top must be between 1 and {MAX_ARTICLES}")

    try:
        if args.command == "ingest":
            return _cmd_ingest(args)
        if args.command == "search":
            return _cmd_search(args, config)
        if args.command == "summarize":
            return _summarize_pipeline(args, config)
        return _cmd_serve(args, config)
    except (CorpusError, InvalidRequest, LlmError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
