from importlib import resources

import pytest

from scholarsum.corpus import ingest

TOY_CORPUS = str(resources.files("scholarsum").joinpath("data/toy_corpus.jsonl"))

# Both demo scenarios are replayed at a pinned scoring year so popularity
# values, and therefore golden outputs, never drift with the wall clock.
NOW_YEAR = 2026


@pytest.fixture(scope="session")
def toy_corpus_path() -> str:
    return TOY_CORPUS


@pytest.fixture(scope="session")
def toy_snapshot():
    return ingest(TOY_CORPUS)
