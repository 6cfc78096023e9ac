"""HTTP control and monitoring surface.

A thin view/command layer: every number it reports comes straight from the
store or the live crawler (no recomputation), and mutating endpoints are
idempotent or single-flight. Serves the dashboard's static files at "/" when
a build is available.
"""

from __future__ import annotations

import logging
import threading
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from webharvest import lid as lid_mod
from webharvest import orchestrator, seeder
from webharvest.config import CrawlConfig
from webharvest.linkfilter import load_link_rules
from webharvest.store import Store

logger = logging.getLogger(__name__)


class ServiceState:
    def __init__(
        self,
        store: Store,
        config: CrawlConfig,
        lid_model: lid_mod.LidModel | None = None,
        engine: seeder.SearchEngine | None = None,
        link_rules_path: str | None = None,
    ):
        self.store = store
        self.config = config
        self.lid_model = lid_model
        self.engine = engine
        self.link_rules_path = link_rules_path
        self.link_rules = load_link_rules(link_rules_path)
        # swap point for tests (fixture transports) and custom fetchers
        self.crawler_factory = orchestrator.Crawler
        self.crawler: orchestrator.Crawler | None = None
        self.iteration_thread: threading.Thread | None = None
        self.iteration_lock = threading.Lock()

    def iteration_running(self) -> bool:
        return self.iteration_thread is not None and self.iteration_thread.is_alive()


def _bad_request(detail: str) -> JSONResponse:
    return JSONResponse(status_code=400, content={"detail": detail})


def create_app(state: ServiceState, static_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="webharvest", docs_url=None, redoc_url=None)

    @app.exception_handler(RequestValidationError)
    async def _validation_handler(request: Request, exc: RequestValidationError):
        return _bad_request(str(exc.errors()[:1]))

    @app.get("/api/status")
    def status() -> dict:
        crawler = state.crawler
        live = (
            crawler.status.snapshot()
            if crawler is not None
            else {
                "state": "idle",
                "queue_depth": 0,
                "visited": 0,
                "saved": 0,
                "blacklisted": 0,
                "errors": 0,
                "new_sentences": 0,
                "sentences_per_minute": 0.0,
                "workers": {},
            }
        )
        tasks = state.store.task_counts()
        live["queue_depth"] = tasks["pending"] if live["state"] == "idle" else live["queue_depth"]
        return {
            **live,
            "sentences_total": state.store.sentence_count(),
            "tasks": tasks,
            "current_iteration": state.store.running_iteration(),
        }

    @app.get("/api/stats")
    def stats() -> dict:
        return state.store.compute_stats().as_dict()

    @app.get("/api/domains")
    def domains(sort: str = "sentences", limit: int = 10, offset: int = 0):
        keys = {"sentences": "sentence_count", "urls": "url_count"}
        if sort not in keys:
            return _bad_request(f"bad sort key: {sort}")
        if limit < 0 or offset < 0:
            return _bad_request("limit/offset must be non-negative")
        rows = state.store.compute_stats(top_n=10**9).top_domains
        rows.sort(key=lambda r: (-r[keys[sort]], r["domain"]))
        return {"domains": rows[offset : offset + limit]}

    @app.get("/api/sentences")
    def sentences(
        min_proba: float | None = None,
        domain: str | None = None,
        limit: int = 50,
        offset: int = 0,
    ):
        if min_proba is not None and not 0.0 <= min_proba <= 1.0:
            return _bad_request("min_proba must be in [0, 1]")
        if limit < 0 or offset < 0:
            return _bad_request("limit/offset must be non-negative")
        rows = state.store.sentences_page(
            min_proba=min_proba, domain=domain, limit=limit, offset=offset
        )
        return {"sentences": rows}

    @app.post("/api/blacklist")
    def blacklist(payload: dict):
        domain = (payload.get("domain") or "").strip().lower()
        if not domain or "/" in domain or " " in domain or "." not in domain:
            return _bad_request("malformed domain")
        cancelled = state.store.blacklist_domain(domain)
        return {"domain": domain, "cancelled": cancelled, "ok": True}

    @app.post("/api/link-rules/reload")
    def reload_link_rules():
        state.link_rules = load_link_rules(state.link_rules_path)
        return {"ok": True}

    @app.post("/api/iterations")
    def start_iteration(payload: dict | None = None):
        seed_count = int((payload or {}).get("seed_count", 10))
        if seed_count < 0:
            return _bad_request("seed_count must be non-negative")
        if state.lid_model is None or state.engine is None:
            return JSONResponse(
                status_code=409,
                content={"detail": "service started without a LID model or search engine"},
            )
        with state.iteration_lock:
            if state.iteration_running():
                return JSONResponse(
                    status_code=409, content={"detail": "iteration already running"}
                )
            iteration_id = state.store.create_iteration()
            rng_seed = (payload or {}).get("rng_seed", iteration_id)

            def run() -> None:
                try:
                    crawler = state.crawler_factory(
                        state.store,
                        state.config,
                        state.lid_model,
                        link_rules=state.link_rules,
                    )
                    state.crawler = crawler
                    report = orchestrator.run_iteration(
                        state.config,
                        state.store,
                        state.engine,
                        state.lid_model,
                        seed_count=seed_count,
                        rng_seed=rng_seed,
                        crawler=crawler,
                        progress=lambda p: state.store.update_iteration(
                            iteration_id, progress=p
                        ),
                    )
                    state.store.update_iteration(
                        iteration_id, status="done", report=report.as_dict()
                    )
                except Exception as exc:
                    logger.exception("iteration %d failed", iteration_id)
                    state.store.update_iteration(
                        iteration_id,
                        status="failed",
                        progress={"error": str(exc)},
                    )

            state.iteration_thread = threading.Thread(target=run, daemon=True)
            state.iteration_thread.start()
        return {"id": iteration_id}

    @app.get("/api/iterations/{iteration_id}")
    def iteration(iteration_id: int):
        info = state.store.get_iteration(iteration_id)
        if info is None:
            return JSONResponse(status_code=404, content={"detail": "unknown iteration"})
        return info

    if static_dir and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="static")

    return app
