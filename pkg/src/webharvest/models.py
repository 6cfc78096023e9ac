"""Shared domain types used by every pipeline stage."""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum


def utcnow() -> datetime:
    return datetime.now(timezone.utc).replace(microsecond=0)


def iso_utc(dt: datetime) -> str:
    """Render a timestamp as ISO-8601 UTC with a trailing Z."""
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


class TaskState(str, Enum):
    PENDING = "pending"
    VISITED = "visited"
    BLACKLISTED = "blacklisted"


@dataclass(frozen=True)
class SentenceRecord:
    """One harvested sentence plus its provenance."""

    text: str
    url: str
    crawl_proba: float
    date: datetime
    dedup_key: str

    def __post_init__(self) -> None:
        if not 0.0 <= self.crawl_proba <= 1.0:
            raise ValueError(f"crawl_proba out of range: {self.crawl_proba}")
        if self.text != self.text.strip():
            raise ValueError("sentence text has leading/trailing whitespace")


@dataclass(frozen=True)
class UrlTask:
    """A crawl work item. Seed-derived tasks always start at depth 0."""

    url: str
    depth: int
    parent_url: str | None = None
    state: TaskState = TaskState.PENDING
    discovered_at: datetime = field(default_factory=utcnow)
    new_sentence_count: int = 0

    def __post_init__(self) -> None:
        if self.depth < 0:
            raise ValueError("depth must be non-negative")


@dataclass(frozen=True)
class SeedQuery:
    """A generated search query: the sampled words and their LID score."""

    words: tuple[str, ...]
    lid_proba: float
    created_at: datetime = field(default_factory=utcnow)
    status: str = "pending"

    def query_string(self) -> str:
        """Each word double-quoted so search engines don't 'correct' it."""
        return " ".join(f'"{w}"' for w in self.words)

    def word_key(self) -> str:
        """Order-independent identity of the query's word multiset."""
        return "\x1f".join(sorted(self.words))


@dataclass(frozen=True)
class VocabEntry:
    word: str
    frequency: int


@dataclass(frozen=True)
class PageOutcome:
    """Per-page counters the decider acts on."""

    url: str
    total_sentences: int
    new_sentences: int
    depth: int

    def __post_init__(self) -> None:
        if self.new_sentences > self.total_sentences:
            raise ValueError("new_sentences cannot exceed total_sentences")


@dataclass
class IterationReport:
    """One seed -> crawl cycle, with the iteration-table column semantics."""

    seeds: int = 0
    urls_found: int = 0
    urls_good: int = 0
    new_sentences: int = 0
    new_domains: int = 0
    new_urls: int = 0
    runtime: float = 0.0

    @property
    def percent_good(self) -> float:
        return 100.0 * self.urls_good / max(1, self.urls_found)

    def as_dict(self) -> dict:
        return {
            "seeds": self.seeds,
            "urls_found": self.urls_found,
            "urls_good": self.urls_good,
            "percent_good": round(self.percent_good, 2),
            "new_sentences": self.new_sentences,
            "new_domains": self.new_domains,
            "new_urls": self.new_urls,
            "runtime": round(self.runtime, 3),
        }
