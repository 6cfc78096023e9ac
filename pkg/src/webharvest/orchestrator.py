"""Crawl orchestration: task scheduling, politeness, the per-page pipeline,
and full seed -> crawl -> report iterations.

Pipeline per page, in order: scrape, normalize, split, filter, language ID,
then the save/blacklist and follow decisions. Individual page failures are
recorded on the task and never abort the crawl.

Scheduling is breadth-first: FIFO within a depth level, lower depths first.
Per domain there is at most one in-flight request, and consecutive request
starts are separated by the politeness delay (robots.txt fetches included).
"""

from __future__ import annotations

import heapq
import logging
import threading
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Callable
from urllib.parse import urlsplit
from urllib.robotparser import RobotFileParser

from webharvest import decider, extract, lid as lid_mod, seeder, sentfilter, sentsplit, textnorm
from webharvest.config import CrawlConfig
from webharvest.extract import FetchError, Fetcher
from webharvest.linkfilter import LinkRules, apply_rules, load_link_rules, normalize_url
from webharvest.models import (
    IterationReport,
    PageOutcome,
    SentenceRecord,
    TaskState,
    UrlTask,
    utcnow,
)
from webharvest.store import Store, dedup_key, host_of

logger = logging.getLogger(__name__)

Tracer = Callable[[str, str], None]  # (stage, url)


class _Scheduler:
    """Depth-ordered task queue with per-domain politeness."""

    def __init__(self, politeness_delay: float):
        self.delay = politeness_delay
        self._lock = threading.Lock()
        self._cond = threading.Condition(self._lock)
        self._heap: list[tuple[int, int, UrlTask]] = []
        self._seq = 0
        self._busy: set[str] = set()
        self._next_allowed: dict[str, float] = {}
        self._in_flight = 0
        self._closed = False

    def push(self, task: UrlTask) -> None:
        with self._cond:
            heapq.heappush(self._heap, (task.depth, self._seq, task))
            self._seq += 1
            self._cond.notify_all()

    def queue_depth(self) -> int:
        with self._lock:
            return len(self._heap)

    def get(self) -> UrlTask | None:
        """Next eligible task, or None when the crawl is finished."""
        with self._cond:
            while True:
                if self._closed:
                    return None
                now = time.monotonic()
                chosen = None
                for i, (_, _, task) in enumerate(sorted(self._heap)):
                    host = host_of(task.url)
                    if host in self._busy:
                        continue
                    if now < self._next_allowed.get(host, 0.0):
                        continue
                    chosen = task
                    break
                if chosen is not None:
                    self._heap = [e for e in self._heap if e[2] is not chosen]
                    heapq.heapify(self._heap)
                    self._busy.add(host_of(chosen.url))
                    self._in_flight += 1
                    return chosen
                if not self._heap and self._in_flight == 0:
                    return None
                self._cond.wait(timeout=0.05)

    def wait_turn(self, host: str) -> None:
        """Block until a request to ``host`` honours the politeness gap,
        then claim the next slot (start-to-start spacing)."""
        while True:
            with self._lock:
                now = time.monotonic()
                wait = self._next_allowed.get(host, 0.0) - now
                if wait <= 0:
                    self._next_allowed[host] = now + self.delay
                    return
            time.sleep(min(wait, 0.25))

    def task_done(self, host: str) -> None:
        with self._cond:
            self._busy.discard(host)
            self._in_flight -= 1
            self._cond.notify_all()

    def close(self) -> None:
        with self._cond:
            self._closed = True
            self._cond.notify_all()


@dataclass
class CrawlStatus:
    """Mutable, lock-guarded live counters for the monitoring surface."""

    state: str = "idle"
    queue_depth: int = 0
    visited: int = 0
    saved: int = 0
    blacklisted: int = 0
    errors: int = 0
    new_sentences: int = 0
    workers: dict[int, str] = field(default_factory=dict)
    _sentence_times: deque = field(default_factory=lambda: deque(maxlen=500))
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def record_sentences(self, n: int) -> None:
        with self._lock:
            self.new_sentences += n
            now = time.monotonic()
            for _ in range(n):
                self._sentence_times.append(now)

    def sentences_per_minute(self) -> float:
        with self._lock:
            now = time.monotonic()
            recent = [t for t in self._sentence_times if now - t <= 60.0]
            return float(len(recent))

    def snapshot(self) -> dict:
        with self._lock:
            return {
                "state": self.state,
                "queue_depth": self.queue_depth,
                "visited": self.visited,
                "saved": self.saved,
                "blacklisted": self.blacklisted,
                "errors": self.errors,
                "new_sentences": self.new_sentences,
                "sentences_per_minute": self.sentences_per_minute_unlocked(),
                "workers": dict(self.workers),
            }

    def sentences_per_minute_unlocked(self) -> float:
        now = time.monotonic()
        return float(len([t for t in self._sentence_times if now - t <= 60.0]))


class Crawler:
    """Runs the per-page pipeline over the pending task queue."""

    def __init__(
        self,
        store: Store,
        config: CrawlConfig,
        lid_model: lid_mod.LidModel,
        rules: list[sentfilter.RulePolicy] | None = None,
        prefixes: sentsplit.PrefixTable | None = None,
        link_rules: LinkRules | None = None,
        fetcher: Fetcher | None = None,
        tracer: Tracer | None = None,
    ):
        self.store = store
        self.config = config
        self.lid_model = lid_model
        self.rules = rules if rules is not None else sentfilter.load_default_rules()
        self.prefixes = prefixes or sentsplit.load_default_prefixes()
        self.link_rules = link_rules or load_link_rules()
        self.fetcher = fetcher or Fetcher(
            user_agent=config.user_agent,
            timeout=config.fetch_timeout,
            max_body_bytes=config.max_body_bytes,
        )
        self.tracer = tracer
        self.status = CrawlStatus()
        self.saved_urls: set[str] = set()
        self.admitted_urls: set[str] = set()
        self._robots_cache: dict[str, RobotFileParser | None] = {}
        self._robots_lock = threading.Lock()
        self._scheduler: _Scheduler | None = None

    # -- helpers -------------------------------------------------------------

    def _trace(self, stage: str, url: str) -> None:
        if self.tracer:
            self.tracer(stage, url)

    def _robots_allows(self, scheduler: _Scheduler, url: str) -> bool:
        if not self.config.respect_robots:
            return True
        parts = urlsplit(url)
        host = (parts.hostname or "").lower()
        key = f"{parts.scheme}://{host}"
        with self._robots_lock:
            cached = self._robots_cache.get(key, "missing")
        if cached == "missing":
            robots_url = f"{key}/robots.txt"
            parser: RobotFileParser | None = RobotFileParser()
            try:
                result = self.fetcher.fetch(robots_url)
                parser.parse(result.body.splitlines())
            except FetchError:
                parser = None  # unreachable robots means no restrictions
            with self._robots_lock:
                self._robots_cache[key] = parser
            cached = parser
        if cached is None:
            return True
        return cached.can_fetch(self.config.user_agent, url)

    def _accept_sentences(
        self, text: str, url: str, trace_url: str | None = None
    ) -> list[SentenceRecord]:
        trace_url = trace_url or url
        self._trace("split", trace_url)
        sentences = sentsplit.split_sentences(text, self.prefixes)
        self._trace("filter", trace_url)
        passing = []
        seen: set[str] = set()
        for sentence in sentences:
            if sentence in seen:
                continue
            seen.add(sentence)
            if sentfilter.check(sentence, self.rules).passed:
                passing.append(sentence)
        self._trace("lid", trace_url)
        records = []
        now = utcnow()
        for sentence in passing:
            proba = lid_mod.prob_target(self.lid_model, sentence)
            if proba >= self.config.crawl_lid_threshold:
                records.append(
                    SentenceRecord(
                        text=sentence,
                        url=url,
                        crawl_proba=proba,
                        date=now,
                        dedup_key=dedup_key(sentence),
                    )
                )
        return records

    def _admit_links(self, task: UrlTask, final_url: str, hrefs: list[str]) -> int:
        rules = self.link_rules.with_blacklist(self.store.blacklisted_domains())
        admitted = 0
        for href in hrefs:
            normalized = normalize_url(final_url, href)
            if normalized is None:
                continue
            filtered = apply_rules(normalized, rules)
            if filtered is None:
                continue
            child = UrlTask(
                url=filtered,
                depth=task.depth + 1,
                parent_url=task.url,
                state=TaskState.PENDING,
            )
            if self.store.add_task(child):
                self.admitted_urls.add(filtered)
                admitted += 1
                if self._scheduler is not None:
                    self._scheduler.push(child)
        return admitted

    # -- pipeline -------------------------------------------------------------

    def process_page(self, scheduler: _Scheduler, task: UrlTask) -> None:
        if not decider.should_visit(task, self.store):
            return
        if not self._robots_allows(scheduler, task.url):
            self.store.mark_visited(task.url, 0, 0, error="robots-disallowed")
            with self.status._lock:
                self.status.visited += 1
                self.status.errors += 1
            return
        self._trace("fetch", task.url)
        try:
            result = self.fetcher.fetch(task.url)
        except FetchError as exc:
            logger.info("fetch failed: %s", exc)
            self.store.mark_visited(task.url, 0, 0, error=exc.kind)
            with self.status._lock:
                self.status.visited += 1
                self.status.errors += 1
            return
        blocks = extract.extract_blocks(result.body)
        text = extract.page_text(blocks)
        self._trace("normalize", task.url)
        text = textnorm.fix_encoding(text)
        text, _ = textnorm.normalize_text(text)
        records = self._accept_sentences(text, result.url, trace_url=task.url)
        self._trace("decide", task.url)
        outcome = PageOutcome(
            url=task.url,
            total_sentences=len(records),
            new_sentences=0,
            depth=task.depth,
        )
        if decider.save_or_blacklist(outcome, self.config) == decider.BLACKLIST_URL:
            self.store.mark_url_blacklisted(task.url)
            with self.status._lock:
                self.status.blacklisted += 1
            return
        inserted = self.store.add_sentences(records)
        self.store.mark_visited(task.url, inserted, len(records))
        self.saved_urls.add(task.url)
        with self.status._lock:
            self.status.visited += 1
            self.status.saved += 1
        self.status.record_sentences(inserted)
        outcome = PageOutcome(
            url=task.url,
            total_sentences=len(records),
            new_sentences=inserted,
            depth=task.depth,
        )
        if decider.should_follow(outcome, self.config):
            hrefs = extract.extract_links(result.body)
            self._admit_links(task, result.url, hrefs)

    def _worker(self, scheduler: _Scheduler, worker_id: int) -> None:
        while True:
            task = scheduler.get()
            if task is None:
                self.status.workers[worker_id] = "done"
                return
            self.status.workers[worker_id] = task.url
            try:
                self.process_page(scheduler, task)
            except Exception:
                logger.exception("task failed: %s", task.url)
                self.store.mark_visited(task.url, 0, 0, error="internal")
                with self.status._lock:
                    self.status.errors += 1
            finally:
                self.status.workers[worker_id] = "idle"
                self.status.queue_depth = scheduler.queue_depth()
                scheduler.task_done(host_of(task.url))

    def run_crawl(self) -> IterationReport:
        """Process every pending task to completion; returns crawl counters
        (seed fields zero)."""
        started = time.monotonic()
        domains_before = self.store.sentence_hosts()
        sentences_before = self.store.sentence_count()
        scheduler = _Scheduler(self.config.politeness_delay)
        self._scheduler = scheduler
        self.fetcher.pre_request = lambda url: scheduler.wait_turn(host_of(url))
        for task in self.store.pending_tasks():
            scheduler.push(task)
        self.status.state = "crawling"
        self.status.queue_depth = scheduler.queue_depth()
        workers = [
            threading.Thread(target=self._worker, args=(scheduler, i), daemon=True)
            for i in range(max(1, self.config.fetch_workers))
        ]
        for w in workers:
            w.start()
        for w in workers:
            w.join()
        self.fetcher.pre_request = None
        self._scheduler = None
        self.status.state = "idle"
        self.status.queue_depth = 0
        domains_after = self.store.sentence_hosts()
        report = IterationReport(
            seeds=0,
            urls_found=0,
            urls_good=0,
            new_sentences=self.store.sentence_count() - sentences_before,
            new_domains=len(domains_after - domains_before),
            new_urls=len(self.admitted_urls),
            runtime=time.monotonic() - started,
        )
        return report


class _CountingEngine:
    """Wraps a search engine to count unique returned URLs (the 'found'
    column of the iteration report)."""

    def __init__(self, engine: seeder.SearchEngine):
        self.engine = engine
        self.found: set[str] = set()

    def search(self, query: str, page: int) -> list[str]:
        urls = self.engine.search(query, page)
        self.found.update(urls)
        return urls


def run_iteration(
    config: CrawlConfig,
    store: Store,
    engine: seeder.SearchEngine,
    lid_model: lid_mod.LidModel,
    seed_count: int = 10,
    rng_seed: int = 0,
    wordlists: dict[str, frozenset[str]] | None = None,
    crawler: Crawler | None = None,
    progress: Callable[[dict], None] | None = None,
) -> IterationReport:
    """One full cycle: vocabulary -> seeds -> submissions -> crawl -> report."""
    started = time.monotonic()
    crawler = crawler or Crawler(store, config, lid_model)
    counting = _CountingEngine(engine)
    report = IterationReport()

    if seed_count > 0:
        vocab = seeder.filter_vocab(
            seeder.build_vocab(store), wordlists or seeder.default_wordlists()
        )
        known = store.known_query_keys()
        queries = seeder.generate_seeds(
            vocab, seed_count, rng_seed, lid_model, config, known_word_keys=known
        )
        seed_urls: set[str] = set()
        for i, query in enumerate(queries):
            store.record_query(query)
            admitted = seeder.submit_seed(query, counting, store, crawler.link_rules, config)
            seed_urls.update(admitted)
            if progress:
                progress({"phase": "seeding", "queries_done": i + 1, "queries": len(queries)})
        report.seeds = len(queries)
        report.urls_found = len(counting.found)
    else:
        seed_urls = set()

    if seed_count > 0:
        if progress:
            progress({"phase": "crawling"})
        crawl_report = crawler.run_crawl()
        report.urls_good = len(seed_urls & crawler.saved_urls)
        report.new_sentences = crawl_report.new_sentences
        report.new_domains = crawl_report.new_domains
        report.new_urls = len(seed_urls) + crawl_report.new_urls
    report.runtime = time.monotonic() - started
    if progress:
        progress({"phase": "done"})
    return report
