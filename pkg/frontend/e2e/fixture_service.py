#!/usr/bin/env python3
"""End-to-end fixture for the dashboard tests.

Starts, in one process:

* a page server hosting a small crawlable site plus a search-engine results
  page (single host, so plain fetching works without transport tricks);
* the webharvest HTTP service over a bootstrapped store that also carries two
  pending tasks for a throwaway domain (the blacklist-click test target);
* an identically bootstrapped second database for a CLI `iterate` run, so the
  dashboard's report table can be compared against `iterate --json`.

Prints one JSON config line to stdout when everything is ready, then serves
until killed.
"""

import json
import sys
import tempfile
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parents[2]
sys.path.insert(0, str(REPO_ROOT / "tests"))

import requests  # noqa: E402
import uvicorn  # noqa: E402

import fixture_web  # noqa: E402
import lid_corpus  # noqa: E402
from webharvest import lid  # noqa: E402
from webharvest.config import CrawlConfig  # noqa: E402
from webharvest.models import SentenceRecord, TaskState, UrlTask, utcnow  # noqa: E402
from webharvest.seeder import HtmlSearchEngine  # noqa: E402
from webharvest.service import ServiceState, create_app  # noqa: E402
from webharvest.store import Store, dedup_key  # noqa: E402

GSW = fixture_web.GSW_SENTENCES


def build_pages(base: str) -> dict[str, bytes]:
    def page(paragraphs, links):
        paras = "\n".join(f"<p>{p}</p>" for p in paragraphs)
        nav = "\n".join(f'<a href="{href}">weiter</a>' for href in links)
        return f"<html><body>{paras}\n{nav}</body></html>".encode()

    return {
        "/engine": (
            "<html><body><h1>results</h1>"
            f'<a href="{base}/site/index.html">GSW Forum</a>'
            "</body></html>"
        ).encode(),
        "/site/index.html": page(GSW[0:4], ["/site/t1.html", "/site/t2.html"]),
        "/site/t1.html": page(GSW[4:7], ["/site/deep.html"]),
        "/site/t2.html": page(GSW[7:8], ["/site/never.html"]),
        "/site/deep.html": page(GSW[8:11], []),
        "/site/never.html": page([fixture_web.DECOY_SENTENCES[0]], []),
    }


def start_page_server() -> tuple[ThreadingHTTPServer, int]:
    server_ref: dict = {}

    class Handler(BaseHTTPRequestHandler):
        def do_GET(self):
            path = self.path.split("?", 1)[0]
            query = self.path.split("?", 1)[1] if "?" in self.path else ""
            pages = server_ref["pages"]
            if path == "/engine":
                # only page 0 carries results; deeper pages are empty
                params = dict(p.split("=", 1) for p in query.split("&") if "=" in p)
                if params.get("page", "0") != "0":
                    body = b"<html><body>no more results</body></html>"
                else:
                    body = pages["/engine"]
            elif path in pages:
                body = pages[path]
            else:
                self.send_response(404)
                self.end_headers()
                return
            self.send_response(200)
            self.send_header("Content-Type", "text/html; charset=utf-8")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def log_message(self, *args):
            pass

    server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
    port = server.server_address[1]
    server_ref["pages"] = build_pages(f"http://127.0.0.1:{port}")
    threading.Thread(target=server.serve_forever, daemon=True).start()
    return server, port


def bootstrap(store: Store) -> None:
    import random

    rng = random.Random(900)
    when = utcnow()
    for i in range(25):
        text = lid_corpus.make_sentence(rng, "GSW", 6, 12)
        store.add_sentence(SentenceRecord(
            text=text, url=f"http://bootstrap.test/{i}", crawl_proba=0.99,
            date=when, dedup_key=dedup_key(text),
        ))


def main() -> None:
    tmp = Path(tempfile.mkdtemp(prefix="webharvest-e2e-"))

    corpus = lid_corpus.build_corpus(per_class=200, rng_seed=42)
    model = lid.train(corpus, order=3)
    for sentence in GSW:
        proba = lid.prob_target(model, sentence)
        assert proba >= 0.92, (sentence, proba)
    model_path = tmp / "model.whlid"
    lid.save_model(model, model_path)

    _pages, page_port = start_page_server()
    engine_endpoint = f"http://127.0.0.1:{page_port}/engine?q={{query}}&page={{page}}"

    db_cli = tmp / "cli.db"
    cli_store = Store(db_cli)
    bootstrap(cli_store)
    cli_store.close()

    db_api = tmp / "api.db"
    api_store = Store(db_api)
    bootstrap(api_store)
    api_store.add_task(UrlTask(url="http://blacklistme.test/a", depth=0,
                               state=TaskState.PENDING))
    api_store.add_task(UrlTask(url="http://blacklistme.test/b", depth=1,
                               state=TaskState.PENDING))

    config = CrawlConfig(politeness_delay=0.25, fetch_workers=2)
    state = ServiceState(
        api_store,
        config,
        lid_model=model,
        engine=HtmlSearchEngine(engine_endpoint, politeness_delay=0.05),
    )
    app = create_app(state, static_dir=REPO_ROOT / "frontend" / "dist")

    api_server = uvicorn.Server(uvicorn.Config(
        app, host="127.0.0.1", port=0, log_level="error",
    ))
    threading.Thread(target=api_server.run, daemon=True).start()
    while not api_server.started:
        time.sleep(0.05)
    api_port = api_server.servers[0].sockets[0].getsockname()[1]
    api_base = f"http://127.0.0.1:{api_port}"
    requests.get(f"{api_base}/api/status", timeout=5).raise_for_status()

    print(json.dumps({
        "api": api_base,
        "engine_endpoint": engine_endpoint,
        "db_cli": str(db_cli),
        "model": str(model_path),
        "page_port": page_port,
        "planted": len(GSW[0:11]),
    }), flush=True)

    while True:
        time.sleep(3600)


if __name__ == "__main__":
    main()
