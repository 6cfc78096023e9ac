"""Crawl configuration: defaults, file loading, and validation.

The config file is a flat YAML mapping; every key is optional and falls back
to the defaults below. All thresholds can also be overridden per-run through
CLI flags.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path

import yaml


class ConfigError(ValueError):
    """Raised for unparseable files or invariant-violating values."""


@dataclass(frozen=True)
class CrawlConfig:
    # sentence acceptance during crawl; "below 92% is discarded", so 0.92 passes
    crawl_lid_threshold: float = 0.92
    # stricter gate applied to generated seed queries
    seed_lid_threshold: float = 0.95
    # default export cutoff for the high-confidence corpus
    export_lid_threshold: float = 0.99
    max_depth: int = 3
    # follow outgoing links only when a page yielded at least this many new
    # sentences ("more than two" -> 3)
    follow_min_new_sentences: int = 3
    # save a page when it has at least this many target-language sentences
    save_min_sentences: int = 1
    seeds_urls_per_query: int = 20
    seed_word_count: int = 3
    politeness_delay: float = 1.0
    fetch_workers: int = 4
    fetch_timeout: float = 10.0
    max_body_bytes: int = 2_000_000
    user_agent: str = "webharvest/0.1 (+corpus research crawler)"
    respect_robots: bool = True

    def validate(self) -> None:
        for key in ("crawl_lid_threshold", "seed_lid_threshold", "export_lid_threshold"):
            value = getattr(self, key)
            if not 0.0 <= value <= 1.0:
                raise ConfigError(f"{key} must be in [0, 1], got {value}")
        if not (self.crawl_lid_threshold <= self.seed_lid_threshold <= self.export_lid_threshold):
            raise ConfigError(
                "thresholds must be ordered: crawl_lid_threshold <= "
                "seed_lid_threshold <= export_lid_threshold"
            )
        for key in ("max_depth", "follow_min_new_sentences", "save_min_sentences",
                    "seeds_urls_per_query", "fetch_workers"):
            if getattr(self, key) < 0:
                raise ConfigError(f"{key} must be non-negative")
        if self.seed_word_count < 1:
            raise ConfigError("seed_word_count must be at least 1")
        if self.politeness_delay < 0:
            raise ConfigError("politeness_delay must be non-negative")

    def replace(self, **overrides) -> "CrawlConfig":
        cfg = dataclasses.replace(self, **overrides)
        cfg.validate()
        return cfg


_FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(CrawlConfig)}


def _coerce(key: str, value) -> object:
    kind = _FIELD_TYPES[key]
    try:
        if kind == "bool":
            if isinstance(value, bool):
                return value
            if isinstance(value, str):
                return value.strip().lower() in ("1", "true", "yes", "on")
            return bool(value)
        if kind == "int":
            return int(value)
        if kind == "float":
            return float(value)
        return str(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{key}: cannot interpret {value!r}") from exc


def load_config(path: str | Path) -> CrawlConfig:
    """Load a config file; missing keys take defaults, bad values raise
    ConfigError naming the offending key."""
    raw = Path(path).read_text(encoding="utf-8")
    try:
        doc = yaml.safe_load(raw)
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    if doc is None:
        doc = {}
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: expected a flat key-value mapping")
    overrides = {}
    for key, value in doc.items():
        if key not in _FIELD_TYPES:
            raise ConfigError(f"unknown config key: {key}")
        overrides[key] = _coerce(key, value)
    cfg = CrawlConfig(**overrides)
    cfg.validate()
    return cfg


def dump_config(cfg: CrawlConfig) -> str:
    """Serialize a config so that load(dump(cfg)) round-trips."""
    return yaml.safe_dump(dataclasses.asdict(cfg), sort_keys=True)


def load_config_string(text: str) -> CrawlConfig:
    doc = yaml.safe_load(text) or {}
    if not isinstance(doc, dict):
        raise ConfigError("expected a flat key-value mapping")
    overrides = {}
    for key, value in doc.items():
        if key not in _FIELD_TYPES:
            raise ConfigError(f"unknown config key: {key}")
        overrides[key] = _coerce(key, value)
    cfg = CrawlConfig(**overrides)
    cfg.validate()
    return cfg
