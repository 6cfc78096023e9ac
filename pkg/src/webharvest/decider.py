"""The three crawl decisions: visit, save-or-blacklist, follow.

Saving keys on the *total* number of accepted sentences on a page (pages
that only repeat known sentences are still worth keeping as sources), while
following keys on the *new* ones — pages contributing little new content are
usually quotes or false positives and their links lead nowhere useful.
"""

from __future__ import annotations

from webharvest.config import CrawlConfig
from webharvest.models import PageOutcome, UrlTask
from webharvest.store import Store, host_of

SAVE = "save"
BLACKLIST_URL = "blacklist_url"


def should_visit(task: UrlTask, store: Store) -> bool:
    """Visit only URLs never seen before, and never a blacklisted domain.

    Recrawl policies (revisiting by content yield) would hook in here.
    """
    state = store.task_state(task.url)
    if state in ("visited", "blacklisted"):
        return False
    if store.is_domain_blacklisted(host_of(task.url)):
        return False
    return True


def save_or_blacklist(outcome: PageOutcome, config: CrawlConfig) -> str:
    """Keep any URL with at least one accepted sentence; otherwise blacklist
    the URL (not its domain)."""
    if outcome.total_sentences >= config.save_min_sentences:
        return SAVE
    return BLACKLIST_URL


def should_follow(outcome: PageOutcome, config: CrawlConfig) -> bool:
    """Follow outgoing links only from productive pages within the depth cap."""
    return (
        outcome.new_sentences >= config.follow_min_new_sentences
        and outcome.depth < config.max_depth
    )
