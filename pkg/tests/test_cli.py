import json
from pathlib import Path

import pytest

from scholarsum.cli import main

from conftest import NOW_YEAR

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for var in ("CORPUS_PATH", "LLM_BACKEND", "LLM_BASE_URL", "LLM_MODEL",
                "BUDGET_TOKENS", "NOW_YEAR"):
        monkeypatch.delenv(var, raising=False)


def write_lines(tmp_path, lines):
    path = tmp_path / "corpus.jsonl"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return str(path)


def good_record(id="A1", title="A title"):
    return json.dumps({
        "id": id, "title": title, "abstract": "Something happens. Then more.",
        "year": 2020, "doc_type": "publication", "topics": ["t"], "citation_count": 1,
    })


def test_ingest_prints_report(tmp_path, capsys):
    path = write_lines(tmp_path, [good_record("A1"), "{broken", good_record("A2")])
    assert main(["ingest", "--corpus", path]) == 0
    out = capsys.readouterr().out
    assert "accepted=2 rejected=1 total=3" in out
    assert "line 2: malformed record" in out


def test_ingest_validate_only_fails_on_rejects(tmp_path):
    path = write_lines(tmp_path, [good_record("A1"), "{broken"])
    assert main(["ingest", "--corpus", path, "--validate-only"]) == 1


def test_ingest_duplicate_id_exits_1_naming_id(tmp_path, capsys):
    path = write_lines(tmp_path, [good_record("A1"), good_record("A1")])
    assert main(["ingest", "--corpus", path]) == 1
    err = capsys.readouterr().err
    assert "A1" in err


def test_unknown_subcommand_is_usage_error(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["frobnicate"])
    assert excinfo.value.code == 2
    assert "usage" in capsys.readouterr().err.lower()


def test_missing_corpus_is_usage_error(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["search", "--query", "x"])
    assert excinfo.value.code == 2


def test_top_out_of_range_is_usage_error(toy_corpus_path):
    with pytest.raises(SystemExit) as excinfo:
        main(["summarize", "--corpus", toy_corpus_path, "--top", "21", "--mock-llm"])
    assert excinfo.value.code == 2


def test_search_prints_rank_score_id_title(toy_corpus_path, capsys):
    code = main([
        "search", "--corpus", toy_corpus_path, "--query", "citation ranking",
        "--order", "influence", "--limit", "3", "--now-year", str(NOW_YEAR),
    ])
    assert code == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 3
    rank, score, article_id, title = lines[0].split("\t")
    assert rank == "1"
    assert score == "2100.0000"
    assert article_id == "cit-01"
    assert title.startswith("PageRank Beyond the Web")


def test_summarize_top10_prints_three_paragraphs_and_references(toy_corpus_path, capsys):
    code = main([
        "summarize", "--corpus", toy_corpus_path, "--query", "citation ranking",
        "--order", "influence", "--topic", "Artificial intelligence",
        "--top", "10", "--mock-llm", "--now-year", str(NOW_YEAR),
    ])
    assert code == 0
    out = capsys.readouterr().out
    summary, references = out.split("References:")
    assert summary.strip().count("\n\n") == 2  # three paragraphs
    ref_lines = [l for l in references.strip().splitlines() if l]
    assert len(ref_lines) == 10
    assert ref_lines[0].startswith("[1] ")
    assert ref_lines[0].endswith("(cit-01)")


def test_summarize_mock_output_byte_deterministic(toy_corpus_path, capsys):
    argv = [
        "summarize", "--corpus", toy_corpus_path, "--query", "artificial intelligence",
        "--top", "4", "--mock-llm", "--json", "--now-year", str(NOW_YEAR),
    ]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    second = capsys.readouterr().out
    assert first == second


def test_summarize_json_matches_http_contract_fixture(toy_corpus_path, capsys):
    code = main([
        "summarize", "--corpus", toy_corpus_path,
        "--query", "artificial intelligence agriculture",
        "--top", "5", "--mock-llm", "--json", "--now-year", str(NOW_YEAR),
    ])
    assert code == 0
    got = json.loads(capsys.readouterr().out)
    expected = json.loads((FIXTURES / "summarize_top5.json").read_text())["response"]
    got.pop("latency_ms"), expected.pop("latency_ms")
    assert got == expected


def test_summarize_misconfigured_remote_exits_1(toy_corpus_path, capsys, monkeypatch):
    monkeypatch.setenv("LLM_BACKEND", "remote")  # no base_url/model configured
    code = main([
        "summarize", "--corpus", toy_corpus_path, "--query", "citation", "--top", "2",
    ])
    assert code == 1
    assert "remote backend requires" in capsys.readouterr().err


def test_summarize_no_results_exits_1(toy_corpus_path, capsys):
    code = main([
        "summarize", "--corpus", toy_corpus_path, "--query", "zzzznothing",
        "--top", "5", "--mock-llm",
    ])
    assert code == 1
    assert "no results" in capsys.readouterr().err
