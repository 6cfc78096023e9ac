"""Persistence: sentences, URL tasks, blacklists, seed queries, iterations.

Backed by a single embedded SQLite file (``:memory:`` for tests). All calls
are serialized through one connection guarded by a lock — a single writer
with consistent reads, which is plenty at crawl throughput.

During a crawl only *exact* text matches count as duplicates; near-duplicate
collapsing (same letters, case-insensitive) happens at export time so that
legitimate writing variants stay available in the store.
"""

from __future__ import annotations

import csv
import json
import sqlite3
import statistics
import threading
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import IO, Iterable
from urllib.parse import urlsplit

from webharvest.linkfilter import registrable_domain
from webharvest.models import SentenceRecord, SeedQuery, TaskState, UrlTask, iso_utc, utcnow

_SCHEMA = """
CREATE TABLE IF NOT EXISTS sentences (
    id INTEGER PRIMARY KEY,
    text TEXT NOT NULL UNIQUE,
    dedup_key TEXT NOT NULL,
    url TEXT NOT NULL,
    host TEXT NOT NULL,
    crawl_proba REAL NOT NULL,
    date TEXT NOT NULL
);
CREATE INDEX IF NOT EXISTS idx_sent_dedup ON sentences(dedup_key);
CREATE INDEX IF NOT EXISTS idx_sent_host ON sentences(host);
CREATE TABLE IF NOT EXISTS tasks (
    url TEXT PRIMARY KEY,
    host TEXT NOT NULL,
    depth INTEGER NOT NULL,
    parent_url TEXT,
    state TEXT NOT NULL,
    discovered_at TEXT NOT NULL,
    new_sentence_count INTEGER NOT NULL DEFAULT 0,
    total_sentence_count INTEGER NOT NULL DEFAULT 0,
    error TEXT
);
CREATE INDEX IF NOT EXISTS idx_tasks_state ON tasks(state);
CREATE TABLE IF NOT EXISTS blacklist_domains (domain TEXT PRIMARY KEY);
CREATE TABLE IF NOT EXISTS seed_queries (
    word_key TEXT PRIMARY KEY,
    words TEXT NOT NULL,
    lid_proba REAL NOT NULL,
    created_at TEXT NOT NULL,
    status TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS iterations (
    id INTEGER PRIMARY KEY,
    started_at TEXT NOT NULL,
    status TEXT NOT NULL,
    progress TEXT NOT NULL DEFAULT '{}',
    report TEXT
);
"""

PROBA_BINS = ("99+", "98+", "97+", "96+", "95+", "94+", "93+", "92+")


def dedup_key(text: str) -> str:
    """Letters only, lowercased. Umlauts are letters and stay distinct."""
    return "".join(ch for ch in text if ch.isalpha()).lower()


def host_of(url: str) -> str:
    return (urlsplit(url).hostname or "").lower()


CHAR_BUCKET = 50
WORD_BUCKET = 10


@dataclass
class CorpusStats:
    total_sentences: int = 0
    distinct_urls: int = 0
    distinct_domains: int = 0
    proba_bins: dict[str, int] = field(default_factory=dict)
    char_len: dict[str, float] = field(default_factory=dict)  # mean/std/median
    word_len: dict[str, float] = field(default_factory=dict)
    char_hist: list[list[int]] = field(default_factory=list)  # [lo, hi, count]
    word_hist: list[list[int]] = field(default_factory=list)
    top_domains: list[dict] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "total_sentences": self.total_sentences,
            "distinct_urls": self.distinct_urls,
            "distinct_domains": self.distinct_domains,
            "proba_bins": self.proba_bins,
            "char_len": self.char_len,
            "word_len": self.word_len,
            "char_hist": self.char_hist,
            "word_hist": self.word_hist,
            "top_domains": self.top_domains,
        }


def _histogram(values: list[int], bucket: int) -> list[list[int]]:
    if not values:
        return []
    top = max(values)
    buckets: dict[int, int] = {}
    for v in values:
        buckets[v // bucket] = buckets.get(v // bucket, 0) + 1
    return [
        [i * bucket, (i + 1) * bucket - 1, buckets.get(i, 0)]
        for i in range(top // bucket + 1)
    ]


class Store:
    def __init__(self, path: str | Path = ":memory:"):
        self.path = str(path)
        self._lock = threading.RLock()
        self._conn = sqlite3.connect(self.path, check_same_thread=False)
        if self.path != ":memory:":
            self._conn.execute("PRAGMA journal_mode=WAL")
        with self._lock, self._conn:
            self._conn.executescript(_SCHEMA)

    def close(self) -> None:
        with self._lock:
            self._conn.close()

    # -- sentences ----------------------------------------------------------

    def add_sentence(self, record: SentenceRecord) -> str:
        """Insert unless the exact text already exists."""
        with self._lock, self._conn:
            cur = self._conn.execute(
                "INSERT OR IGNORE INTO sentences (text, dedup_key, url, host, crawl_proba, date) "
                "VALUES (?, ?, ?, ?, ?, ?)",
                (
                    record.text,
                    record.dedup_key,
                    record.url,
                    host_of(record.url),
                    record.crawl_proba,
                    iso_utc(record.date),
                ),
            )
            return "inserted" if cur.rowcount else "exact_duplicate"

    def add_sentences(self, records: Iterable[SentenceRecord]) -> int:
        """Batch insert; returns how many were new."""
        inserted = 0
        with self._lock, self._conn:
            for record in records:
                cur = self._conn.execute(
                    "INSERT OR IGNORE INTO sentences (text, dedup_key, url, host, crawl_proba, date) "
                    "VALUES (?, ?, ?, ?, ?, ?)",
                    (
                        record.text,
                        record.dedup_key,
                        record.url,
                        host_of(record.url),
                        record.crawl_proba,
                        iso_utc(record.date),
                    ),
                )
                inserted += cur.rowcount
        return inserted

    def has_exact(self, text: str) -> bool:
        with self._lock:
            row = self._conn.execute(
                "SELECT 1 FROM sentences WHERE text = ?", (text,)
            ).fetchone()
            return row is not None

    def sentence_count(self) -> int:
        with self._lock:
            return self._conn.execute("SELECT COUNT(*) FROM sentences").fetchone()[0]

    def sentences_page(
        self,
        min_proba: float | None = None,
        domain: str | None = None,
        limit: int = 50,
        offset: int = 0,
    ) -> list[dict]:
        """Newest-first page for the review UI."""
        clauses, params = [], []
        if min_proba is not None:
            clauses.append("crawl_proba >= ?")
            params.append(min_proba)
        if domain:
            clauses.append("host = ?")
            params.append(domain.lower())
        where = ("WHERE " + " AND ".join(clauses)) if clauses else ""
        params += [limit, offset]
        with self._lock:
            rows = self._conn.execute(
                f"SELECT text, url, host, crawl_proba, date FROM sentences {where} "
                "ORDER BY id DESC LIMIT ? OFFSET ?",
                params,
            ).fetchall()
        return [
            {"text": t, "url": u, "domain": h, "crawl_proba": p, "date": d}
            for t, u, h, p, d in rows
        ]

    def one_sentence_per_url(self) -> list[str]:
        """For vocabulary building: per URL, the sentence with the smallest
        dedup key (a deterministic representative)."""
        with self._lock:
            rows = self._conn.execute(
                "SELECT url, MIN(text) FROM sentences s WHERE dedup_key = "
                "(SELECT MIN(dedup_key) FROM sentences WHERE url = s.url) "
                "GROUP BY url ORDER BY url"
            ).fetchall()
        return [r[1] for r in rows]

    def sentence_hosts(self) -> set[str]:
        with self._lock:
            rows = self._conn.execute("SELECT DISTINCT host FROM sentences").fetchall()
        return {r[0] for r in rows}

    # -- tasks ---------------------------------------------------------------

    def add_task(self, task: UrlTask) -> bool:
        """Admit a URL unless it is already known (any state)."""
        with self._lock, self._conn:
            cur = self._conn.execute(
                "INSERT OR IGNORE INTO tasks "
                "(url, host, depth, parent_url, state, discovered_at, new_sentence_count) "
                "VALUES (?, ?, ?, ?, ?, ?, ?)",
                (
                    task.url,
                    host_of(task.url),
                    task.depth,
                    task.parent_url,
                    task.state.value,
                    iso_utc(task.discovered_at),
                    task.new_sentence_count,
                ),
            )
            return bool(cur.rowcount)

    def known_url(self, url: str) -> bool:
        with self._lock:
            return (
                self._conn.execute("SELECT 1 FROM tasks WHERE url = ?", (url,)).fetchone()
                is not None
            )

    def task_state(self, url: str) -> str | None:
        with self._lock:
            row = self._conn.execute(
                "SELECT state FROM tasks WHERE url = ?", (url,)
            ).fetchone()
            return row[0] if row else None

    def pending_tasks(self) -> list[UrlTask]:
        with self._lock:
            rows = self._conn.execute(
                "SELECT url, depth, parent_url, discovered_at FROM tasks "
                "WHERE state = 'pending' ORDER BY depth, rowid"
            ).fetchall()
        return [
            UrlTask(
                url=u,
                depth=d,
                parent_url=p,
                state=TaskState.PENDING,
                discovered_at=datetime.fromisoformat(t.replace("Z", "+00:00")),
            )
            for u, d, p, t in rows
        ]

    def mark_visited(
        self,
        url: str,
        new_sentence_count: int = 0,
        total_sentence_count: int = 0,
        error: str | None = None,
    ) -> None:
        with self._lock, self._conn:
            self._conn.execute(
                "UPDATE tasks SET state = 'visited', new_sentence_count = ?, "
                "total_sentence_count = ?, error = ? WHERE url = ?",
                (new_sentence_count, total_sentence_count, error, url),
            )

    def mark_url_blacklisted(self, url: str) -> None:
        with self._lock, self._conn:
            self._conn.execute(
                "UPDATE tasks SET state = 'blacklisted' WHERE url = ?", (url,)
            )

    def task_counts(self) -> dict[str, int]:
        with self._lock:
            rows = self._conn.execute(
                "SELECT state, COUNT(*) FROM tasks GROUP BY state"
            ).fetchall()
        counts = {state.value: 0 for state in TaskState}
        counts.update(dict(rows))
        return counts

    # -- domain blacklist -----------------------------------------------------

    def blacklist_domain(self, domain: str) -> int:
        """Add a registrable domain to the blacklist and cancel its pending
        tasks (including subdomains). Returns the number cancelled."""
        domain = registrable_domain(domain.strip().lower())
        if not domain:
            raise ValueError("empty domain")
        with self._lock, self._conn:
            self._conn.execute(
                "INSERT OR IGNORE INTO blacklist_domains (domain) VALUES (?)", (domain,)
            )
            pending = self._conn.execute(
                "SELECT url, host FROM tasks WHERE state = 'pending'"
            ).fetchall()
            cancelled = 0
            for url, host in pending:
                if registrable_domain(host) == domain:
                    self._conn.execute(
                        "UPDATE tasks SET state = 'blacklisted' WHERE url = ?", (url,)
                    )
                    cancelled += 1
            return cancelled

    def blacklisted_domains(self) -> set[str]:
        with self._lock:
            rows = self._conn.execute("SELECT domain FROM blacklist_domains").fetchall()
        return {r[0] for r in rows}

    def is_domain_blacklisted(self, host: str) -> bool:
        return registrable_domain(host) in self.blacklisted_domains()

    # -- seed queries ----------------------------------------------------------

    def record_query(self, query: SeedQuery) -> bool:
        with self._lock, self._conn:
            cur = self._conn.execute(
                "INSERT OR IGNORE INTO seed_queries (word_key, words, lid_proba, created_at, status) "
                "VALUES (?, ?, ?, ?, ?)",
                (
                    query.word_key(),
                    json.dumps(list(query.words), ensure_ascii=False),
                    query.lid_proba,
                    iso_utc(query.created_at),
                    query.status,
                ),
            )
            return bool(cur.rowcount)

    def query_known(self, word_key: str) -> bool:
        with self._lock:
            return (
                self._conn.execute(
                    "SELECT 1 FROM seed_queries WHERE word_key = ?", (word_key,)
                ).fetchone()
                is not None
            )

    def known_query_keys(self) -> set[str]:
        with self._lock:
            rows = self._conn.execute("SELECT word_key FROM seed_queries").fetchall()
        return {r[0] for r in rows}

    def mark_query_submitted(self, word_key: str) -> None:
        with self._lock, self._conn:
            self._conn.execute(
                "UPDATE seed_queries SET status = 'submitted' WHERE word_key = ?",
                (word_key,),
            )

    # -- iterations -------------------------------------------------------------

    def create_iteration(self) -> int:
        with self._lock, self._conn:
            cur = self._conn.execute(
                "INSERT INTO iterations (started_at, status) VALUES (?, 'running')",
                (iso_utc(utcnow()),),
            )
            return cur.lastrowid

    def update_iteration(
        self,
        iteration_id: int,
        status: str | None = None,
        progress: dict | None = None,
        report: dict | None = None,
    ) -> None:
        with self._lock, self._conn:
            if status is not None:
                self._conn.execute(
                    "UPDATE iterations SET status = ? WHERE id = ?", (status, iteration_id)
                )
            if progress is not None:
                self._conn.execute(
                    "UPDATE iterations SET progress = ? WHERE id = ?",
                    (json.dumps(progress), iteration_id),
                )
            if report is not None:
                self._conn.execute(
                    "UPDATE iterations SET report = ? WHERE id = ?",
                    (json.dumps(report), iteration_id),
                )

    def get_iteration(self, iteration_id: int) -> dict | None:
        with self._lock:
            row = self._conn.execute(
                "SELECT id, started_at, status, progress, report FROM iterations WHERE id = ?",
                (iteration_id,),
            ).fetchone()
        if row is None:
            return None
        return {
            "id": row[0],
            "started_at": row[1],
            "status": row[2],
            "progress": json.loads(row[3]),
            "report": json.loads(row[4]) if row[4] else None,
        }

    def running_iteration(self) -> int | None:
        with self._lock:
            row = self._conn.execute(
                "SELECT id FROM iterations WHERE status = 'running' ORDER BY id DESC LIMIT 1"
            ).fetchone()
        return row[0] if row else None

    # -- export & stats -----------------------------------------------------------

    def export_csv(self, min_proba: float, out: IO[str]) -> int:
        """Write the corpus CSV; near-duplicates collapse to the earliest
        crawled record. Deterministic: two exports of an unchanged store are
        byte-identical."""
        writer = csv.writer(out)
        writer.writerow(["text", "url", "crawl_proba", "date"])
        count = 0
        last_key = None
        with self._lock:
            rows = self._conn.execute(
                "SELECT dedup_key, text, url, crawl_proba, date FROM sentences "
                "WHERE crawl_proba >= ? ORDER BY dedup_key ASC, date ASC, id ASC",
                (min_proba,),
            ).fetchall()
        for key, text, url, proba, date in rows:
            if key == last_key:
                continue
            last_key = key
            writer.writerow([text, url, f"{proba:.4f}", date])
            count += 1
        return count

    def compute_stats(self, top_n: int = 10) -> CorpusStats:
        with self._lock:
            rows = self._conn.execute(
                "SELECT text, crawl_proba FROM sentences"
            ).fetchall()
            distinct_urls = self._conn.execute(
                "SELECT COUNT(DISTINCT url) FROM sentences"
            ).fetchone()[0]
            domain_rows = self._conn.execute(
                "SELECT host, COUNT(DISTINCT url), COUNT(*) FROM sentences "
                "GROUP BY host ORDER BY COUNT(*) DESC, host ASC"
            ).fetchall()
        total = len(rows)
        bins = {label: 0 for label in PROBA_BINS}
        char_lens: list[int] = []
        word_lens: list[int] = []
        below = 0
        for text, proba in rows:
            char_lens.append(len(text))
            word_lens.append(len(text.split()))
            pct = int(proba * 100)
            if proba >= 0.99:
                bins["99+"] += 1
            elif pct >= 92:
                bins[f"{pct}+"] += 1
            else:
                below += 1
        if below:
            bins["<92"] = below
        stats = CorpusStats(
            total_sentences=total,
            distinct_urls=distinct_urls,
            distinct_domains=len(domain_rows),
            proba_bins=bins,
        )
        if total:
            stats.char_len = {
                "mean": round(statistics.mean(char_lens), 2),
                "std": round(statistics.pstdev(char_lens), 2),
                "median": statistics.median(char_lens),
            }
            stats.word_len = {
                "mean": round(statistics.mean(word_lens), 2),
                "std": round(statistics.pstdev(word_lens), 2),
                "median": statistics.median(word_lens),
            }
            stats.char_hist = _histogram(char_lens, CHAR_BUCKET)
            stats.word_hist = _histogram(word_lens, WORD_BUCKET)
        stats.top_domains = [
            {
                "domain": host,
                "url_count": urls,
                "sentence_count": sentences,
                "percent": round(100.0 * sentences / max(1, total), 2),
            }
            for host, urls, sentences in domain_rows[:top_n]
        ]
        return stats
