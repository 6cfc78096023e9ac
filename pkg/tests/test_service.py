import json
import time

import pytest
from fastapi.testclient import TestClient

from fixture_web import BLOCKED_DOMAIN, PLANTED, SEED_URL
from test_orchestrator import AnyQueryEngine, _bootstrap, _crawler
from webharvest import orchestrator
from webharvest.config import CrawlConfig
from webharvest.extract import Fetcher
from webharvest.models import UrlTask
from webharvest.service import ServiceState, create_app
from webharvest.store import Store


@pytest.fixture()
def state(store, lid_model):
    config = CrawlConfig(politeness_delay=0.05, fetch_workers=4)
    return ServiceState(store, config, lid_model=lid_model, engine=AnyQueryEngine([SEED_URL]))


@pytest.fixture()
def client(state):
    return TestClient(create_app(state))


def test_status_idle_zeros(client):
    data = client.get("/api/status").json()
    assert data["state"] == "idle"
    assert data["queue_depth"] == 0
    assert data["sentences_total"] == 0
    assert data["sentences_per_minute"] == 0.0
    assert data["current_iteration"] is None


def test_stats_endpoint_equals_cli_stats_json(state, client, tmp_path):
    from click.testing import CliRunner

    from webharvest.cli import main as cli_main

    db_path = tmp_path / "cli.db"
    disk_store = Store(db_path)
    _bootstrap(disk_store)
    _bootstrap(state.store)
    disk_store.close()

    api_stats = client.get("/api/stats").json()
    result = CliRunner().invoke(cli_main, ["stats", "--db", str(db_path), "--json"])
    assert result.exit_code == 0
    assert api_stats == json.loads(result.output)


def test_domains_sorting_and_limit(state, client):
    _bootstrap(state.store)
    data = client.get("/api/domains?sort=sentences&limit=10").json()["domains"]
    assert len(data) <= 10
    counts = [d["sentence_count"] for d in data]
    assert counts == sorted(counts, reverse=True)
    assert sum(d["percent"] for d in data) <= 100.0 + 1e-9

    by_urls = client.get("/api/domains?sort=urls&limit=5").json()["domains"]
    url_counts = [d["url_count"] for d in by_urls]
    assert url_counts == sorted(url_counts, reverse=True)


def test_domains_bad_sort_key(client):
    assert client.get("/api/domains?sort=bogus").status_code == 400


def test_domains_bad_type_is_400(client):
    assert client.get("/api/domains?limit=x").status_code == 400


def test_sentences_filtering(state, client):
    _bootstrap(state.store)
    rows = client.get("/api/sentences?min_proba=0.99&limit=5").json()["sentences"]
    assert len(rows) == 5
    assert all(r["crawl_proba"] >= 0.99 for r in rows)

    rows = client.get("/api/sentences?domain=bootstrap.test&limit=100").json()["sentences"]
    assert len(rows) == 25
    none = client.get("/api/sentences?domain=nosuch.test").json()["sentences"]
    assert none == []
    empty = client.get("/api/sentences?limit=0").json()["sentences"]
    assert empty == []


def test_sentences_bad_params(client):
    assert client.get("/api/sentences?min_proba=1.5").status_code == 400
    assert client.get("/api/sentences?limit=-1").status_code == 400


def test_blacklist_cancels_pending_and_is_idempotent(state, client):
    state.store.add_task(UrlTask(url="http://bad.ch/x", depth=0))
    state.store.add_task(UrlTask(url="http://good.ch/x", depth=0))
    first = client.post("/api/blacklist", json={"domain": "bad.ch"})
    assert first.status_code == 200
    assert first.json()["cancelled"] == 1
    again = client.post("/api/blacklist", json={"domain": "bad.ch"})
    assert again.status_code == 200
    assert state.store.task_state("http://bad.ch/x") == "blacklisted"
    assert state.store.task_state("http://good.ch/x") == "pending"


def test_blacklist_malformed(client):
    assert client.post("/api/blacklist", json={"domain": ""}).status_code == 400
    assert client.post("/api/blacklist", json={"domain": "no spaces .ch"}).status_code == 400
    assert client.post("/api/blacklist", json={}).status_code == 400


def test_unknown_iteration_404(client):
    assert client.get("/api/iterations/424242").status_code == 404


def test_iteration_single_flight_and_report_matches_direct_run(
    store, lid_model, fixture_server
):
    # API-driven iteration
    config = CrawlConfig(politeness_delay=0.05, fetch_workers=4)
    state = ServiceState(
        store, config, lid_model=lid_model, engine=AnyQueryEngine([SEED_URL])
    )
    _bootstrap(state.store)
    state.store.blacklist_domain(BLOCKED_DOMAIN)

    def make_crawler(*args, **kwargs):
        kwargs["fetcher"] = Fetcher(transport_rewriter=fixture_server.transport_rewriter)
        return orchestrator.Crawler(*args, **kwargs)

    state.crawler_factory = make_crawler  # route the API's crawl at the fixture
    client = TestClient(create_app(state))
    started = client.post("/api/iterations", json={"seed_count": 2, "rng_seed": 0})
    assert started.status_code == 200
    iteration_id = started.json()["id"]

    second = client.post("/api/iterations", json={"seed_count": 1})
    assert second.status_code == 409

    deadline = time.monotonic() + 30
    info = None
    while time.monotonic() < deadline:
        info = client.get(f"/api/iterations/{iteration_id}").json()
        if info["status"] != "running":
            break
        time.sleep(0.1)
    assert info["status"] == "done", info

    # direct run on an identical fresh store must produce the same report
    ref_store = Store(":memory:")
    _bootstrap(ref_store)
    ref_store.blacklist_domain(BLOCKED_DOMAIN)
    ref = orchestrator.run_iteration(
        config, ref_store, AnyQueryEngine([SEED_URL]), lid_model,
        seed_count=2, rng_seed=0,
        crawler=_crawler(ref_store, fixture_server, config, lid_model),
    )
    api_report = info["report"]
    ref_report = ref.as_dict()
    for key in ("seeds", "urls_found", "urls_good", "percent_good",
                "new_sentences", "new_domains", "new_urls"):
        assert api_report[key] == ref_report[key], key

    # the crawl actually ran against the fixture and stored the planted set
    texts = {r["text"] for r in
             TestClient(create_app(state)).get("/api/sentences?limit=100").json()["sentences"]}
    assert PLANTED <= texts
    ref_store.close()


def test_status_during_crawl_queue_drains(store, lid_model, fixture_server):
    config = CrawlConfig(politeness_delay=0.2, fetch_workers=2)
    state = ServiceState(store, config, lid_model=lid_model)
    client = TestClient(create_app(state))

    store.blacklist_domain(BLOCKED_DOMAIN)
    store.add_task(UrlTask(url=SEED_URL, depth=0))
    crawler = _crawler(store, fixture_server, config, lid_model)
    state.crawler = crawler

    import threading

    readings = []
    done = threading.Event()

    def poll():
        while not done.is_set():
            readings.append(client.get("/api/status").json())
            time.sleep(0.05)

    poller = threading.Thread(target=poll)
    poller.start()
    crawler.run_crawl()
    done.set()
    poller.join()

    final = client.get("/api/status").json()
    assert final["queue_depth"] == 0
    assert final["sentences_total"] == len(PLANTED)
    assert any(r["state"] == "crawling" for r in readings)
