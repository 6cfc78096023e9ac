from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import lid_corpus  # noqa: E402
from webharvest import lid, sentfilter, sentsplit  # noqa: E402
from webharvest.config import CrawlConfig  # noqa: E402
from webharvest.store import Store  # noqa: E402


@pytest.fixture(scope="session")
def desk_corpus() -> dict[str, list[str]]:
    return lid_corpus.build_corpus(per_class=560, rng_seed=42)


@pytest.fixture(scope="session")
def corpus_splits(desk_corpus):
    return lid.split_corpus(desk_corpus, rng_seed=0)


@pytest.fixture(scope="session")
def lid_model(corpus_splits) -> lid.LidModel:
    train_c, _dev, _test = corpus_splits
    return lid.train(train_c, order=4)


@pytest.fixture(scope="session")
def default_rules():
    return sentfilter.load_default_rules()


@pytest.fixture(scope="session")
def prefixes():
    return sentsplit.load_default_prefixes()


@pytest.fixture()
def store() -> Store:
    s = Store(":memory:")
    yield s
    s.close()


@pytest.fixture()
def crawl_config() -> CrawlConfig:
    # politeness lowered for fixture speed; decision thresholds stay default
    return CrawlConfig(politeness_delay=0.05, fetch_workers=4)


@pytest.fixture()
def fixture_server():
    from fixture_web import FixtureServer

    server = FixtureServer().start()
    yield server
    server.stop()
