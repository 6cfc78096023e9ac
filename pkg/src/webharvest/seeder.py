"""Seed generation: turn corpus vocabulary into search queries and harvest
result URLs.

The pipeline is the 5-step one: sample one sentence per known URL, build a
frequency table over alphabetic lowercase tokens, drop hapaxes and words
from reference wordlists (German/English by default), then sample query
words by frequency. Queries with too many single-letter words or a weak
target-language score are rejected and resampled.
"""

from __future__ import annotations

import logging
import random
import re
import time
from collections import Counter
from importlib import resources
from pathlib import Path
from typing import Protocol

from webharvest import lid as lid_mod
from webharvest.config import CrawlConfig
from webharvest.linkfilter import LinkRules, apply_rules, normalize_url
from webharvest.models import SeedQuery, TaskState, UrlTask, VocabEntry, utcnow
from webharvest.store import Store
from webharvest.extract import extract_links, Fetcher

logger = logging.getLogger(__name__)

REJECTION_BUDGET = 1000
MAX_RESULT_PAGES = 10


class SeederError(ValueError):
    pass


def load_wordlist(path: str | Path) -> frozenset[str]:
    words = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        word = line.strip().lower()
        if word and not word.startswith("#"):
            words.add(word)
    return frozenset(words)


def default_wordlists() -> dict[str, frozenset[str]]:
    base = resources.files("webharvest").joinpath("data/wordlists")
    return {
        "german": load_wordlist(str(base.joinpath("german.txt"))),
        "english": load_wordlist(str(base.joinpath("english.txt"))),
    }


def build_vocab(store: Store) -> list[VocabEntry]:
    """Frequency table over one representative sentence per URL."""
    sentences = store.one_sentence_per_url()
    if not sentences:
        raise SeederError("store has no sentences to build a vocabulary from")
    counts: Counter[str] = Counter()
    for sentence in sentences:
        for token in sentence.split():
            token = token.lower()
            if token and token.isalpha():
                counts[token] += 1
    return [VocabEntry(word=w, frequency=f) for w, f in sorted(counts.items())]


def filter_vocab(
    vocab: list[VocabEntry], wordlists: dict[str, frozenset[str]]
) -> list[VocabEntry]:
    """Drop hapaxes and words found in any reference wordlist."""
    merged: set[str] = set()
    for words in wordlists.values():
        merged |= words
    return [e for e in vocab if e.frequency >= 2 and e.word not in merged]


def _weighted_sample(rng: random.Random, words: list[str], weights: list[int], k: int) -> list[str]:
    """k distinct draws, probability proportional to frequency."""
    chosen: list[str] = []
    pool = list(range(len(words)))
    w = list(weights)
    for _ in range(k):
        total = sum(w[i] for i in pool)
        r = rng.random() * total
        acc = 0.0
        pick = pool[-1]
        for i in pool:
            acc += w[i]
            if r < acc:
                pick = i
                break
        chosen.append(words[pick])
        pool.remove(pick)
    return chosen


def generate_seeds(
    vocab: list[VocabEntry],
    count: int,
    rng_seed: int,
    lid_model: lid_mod.LidModel,
    config: CrawlConfig | None = None,
    known_word_keys: set[str] | None = None,
) -> list[SeedQuery]:
    """Deterministic (per rng_seed) frequency-weighted query generation.

    Constraints per query: at most two single-letter words, target-language
    probability of the joined words >= the seed threshold, and no repetition
    of a previously generated/submitted word multiset.
    """
    config = config or CrawlConfig()
    k = config.seed_word_count
    if len(vocab) < k:
        raise SeederError(f"vocabulary too small: {len(vocab)} < {k}")
    rng = random.Random(rng_seed)
    words = [e.word for e in vocab]
    weights = [e.frequency for e in vocab]
    seen: set[str] = set(known_word_keys or set())
    queries: list[SeedQuery] = []
    for _ in range(count):
        accepted = None
        for _attempt in range(REJECTION_BUDGET):
            sample = _weighted_sample(rng, words, weights, k)
            key = "\x1f".join(sorted(sample))
            if key in seen:
                continue
            if sum(1 for w in sample if len(w) == 1) > 2:
                continue
            proba = lid_mod.prob_target(lid_model, " ".join(sample))
            if proba < config.seed_lid_threshold:
                continue
            accepted = SeedQuery(words=tuple(sample), lid_proba=proba, created_at=utcnow())
            break
        if accepted is None:
            logger.warning(
                "seed generation exhausted %d attempts; returning %d of %d queries",
                REJECTION_BUDGET, len(queries), count,
            )
            break
        seen.add(accepted.word_key())
        queries.append(accepted)
    return queries


class SearchEngine(Protocol):
    """One page of search results for a query string; empty list when the
    results are exhausted."""

    def search(self, query: str, page: int) -> list[str]: ...


class FixtureEngine:
    """Canned results for tests: maps a query string to a list of URLs,
    served in fixed-size pages."""

    def __init__(self, results: dict[str, list[str]], page_size: int = 10):
        self.results = results
        self.page_size = page_size
        self.queries_seen: list[str] = []

    def search(self, query: str, page: int) -> list[str]:
        if page == 0:
            self.queries_seen.append(query)
        urls = self.results.get(query, [])
        start = page * self.page_size
        return urls[start : start + self.page_size]


class HtmlSearchEngine:
    """Generic adapter for an HTML results page.

    ``endpoint_template`` receives ``{query}`` and ``{page}``; result links
    are all anchors whose href matches ``result_pattern`` (a regex), keeping
    document order. Engine specifics (markup, URL shape) change often, so
    they live in configuration rather than code.
    """

    def __init__(
        self,
        endpoint_template: str,
        result_pattern: str = r"^https?://",
        fetcher: Fetcher | None = None,
        politeness_delay: float = 1.0,
    ):
        self.endpoint_template = endpoint_template
        self.result_re = re.compile(result_pattern)
        self.fetcher = fetcher or Fetcher()
        self.politeness_delay = politeness_delay
        self._last_request = 0.0

    def search(self, query: str, page: int) -> list[str]:
        wait = self._last_request + self.politeness_delay - time.monotonic()
        if wait > 0:
            time.sleep(wait)
        self._last_request = time.monotonic()
        from urllib.parse import quote_plus

        url = self.endpoint_template.format(query=quote_plus(query), page=page)
        result = self.fetcher.fetch(url)
        return [h for h in extract_links(result.body) if self.result_re.match(h)]


def submit_seed(
    query: SeedQuery,
    engine: SearchEngine,
    store: Store,
    link_rules: LinkRules,
    config: CrawlConfig | None = None,
) -> list[str]:
    """Submit one query (words double-quoted) and admit new result URLs as
    depth-0 tasks.

    Pagination keeps going until the configured number of *never-seen* URLs
    is collected or the engine runs dry — top results are often already
    known. Returns the admitted URLs.
    """
    config = config or CrawlConfig()
    rules = link_rules.with_blacklist(store.blacklisted_domains())
    admitted: list[str] = []
    found_this_query: set[str] = set()
    query_string = query.query_string()
    for page in range(MAX_RESULT_PAGES):
        urls = engine.search(query_string, page)
        if not urls:
            break
        for raw in urls:
            if not raw.lower().startswith(("http://", "https://")):
                continue  # engines must return absolute URLs
            normalized = normalize_url(raw, raw)
            if normalized is None:
                continue
            filtered = apply_rules(normalized, rules)
            if filtered is None:
                continue
            if filtered in found_this_query:
                continue
            found_this_query.add(filtered)
            if store.known_url(filtered):
                continue
            if store.add_task(
                UrlTask(url=filtered, depth=0, parent_url=None, state=TaskState.PENDING)
            ):
                admitted.append(filtered)
            if len(admitted) >= config.seeds_urls_per_query:
                break
        if len(admitted) >= config.seeds_urls_per_query:
            break
    store.mark_query_submitted(query.word_key())
    return admitted
