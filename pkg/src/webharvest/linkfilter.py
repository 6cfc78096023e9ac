"""URL-only link filtering: canonicalization, exclusion, and rewriting.

Decisions here depend on nothing but the URL string and the loaded rules —
no network access — so excluding a URL is stable and cheap. Redirects and
content-identical URLs are deliberately not resolved; the crawler accepts
the occasional duplicate fetch to keep this layer simple.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from urllib.parse import parse_qsl, urlencode, urljoin, urlsplit, urlunsplit

import yaml

_DEFAULT_PORTS = {"http": "80", "https": "443"}


def _data_path(name: str) -> Path:
    return Path(str(resources.files("webharvest").joinpath(f"data/{name}")))


@dataclass(frozen=True)
class LinkRules:
    excluded_tlds: frozenset[str] = frozenset()
    excluded_extensions: frozenset[str] = frozenset()
    strip_params: tuple[str, ...] = ()  # exact names or prefix patterns like "utm_*"
    host_rewrites: tuple[tuple[re.Pattern, str], ...] = ()
    domain_blacklist: frozenset[str] = frozenset()
    public_suffixes: frozenset[str] = field(default_factory=frozenset)

    def with_blacklist(self, domains: set[str]) -> "LinkRules":
        merged = frozenset(d.lower() for d in domains) | self.domain_blacklist
        return LinkRules(
            excluded_tlds=self.excluded_tlds,
            excluded_extensions=self.excluded_extensions,
            strip_params=self.strip_params,
            host_rewrites=self.host_rewrites,
            domain_blacklist=merged,
            public_suffixes=self.public_suffixes,
        )


def load_public_suffixes(path: str | Path | None = None) -> frozenset[str]:
    p = Path(path) if path else _data_path("public_suffixes.txt")
    suffixes = set()
    for line in p.read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip().lower()
        if line:
            suffixes.add(line)
    return frozenset(suffixes)


def load_link_rules(path: str | Path | None = None) -> LinkRules:
    """Load the rules file (defaults to the bundled one)."""
    p = Path(path) if path else _data_path("link_rules.yaml")
    doc = yaml.safe_load(p.read_text(encoding="utf-8")) or {}
    tlds = set()
    tld_file = doc.get("excluded_tlds_file")
    if tld_file:
        tld_path = (p.parent / tld_file) if not Path(tld_file).is_absolute() else Path(tld_file)
        for line in tld_path.read_text(encoding="utf-8").splitlines():
            line = line.split("#", 1)[0].strip().lower()
            if line:
                tlds.add(line)
    tlds.update(t.lower() for t in doc.get("excluded_tlds", []))
    rewrites = []
    for item in doc.get("host_rewrites", []):
        rewrites.append((re.compile(item["pattern"]), item["replace"]))
    return LinkRules(
        excluded_tlds=frozenset(tlds),
        excluded_extensions=frozenset(e.lower().lstrip(".") for e in doc.get("excluded_extensions", [])),
        strip_params=tuple(s.lower() for s in doc.get("strip_params", [])),
        host_rewrites=tuple(rewrites),
        domain_blacklist=frozenset(d.lower() for d in doc.get("domain_blacklist", [])),
        public_suffixes=load_public_suffixes(),
    )


def registrable_domain(host: str, suffixes: frozenset[str] | None = None) -> str:
    """Registrable domain per the bundled public-suffix snapshot.

    Falls back to the last two labels when no suffix matches. IP literals
    come back unchanged.
    """
    host = host.lower().rstrip(".")
    if not host or host.replace(".", "").isdigit() or ":" in host:
        return host
    if suffixes is None:
        suffixes = _DEFAULT_SUFFIXES
    labels = host.split(".")
    best = 0
    for i in range(len(labels)):
        candidate = ".".join(labels[i:])
        if candidate in suffixes:
            best = len(labels) - i
            break
    if best == 0:
        best = 1
    if best >= len(labels):
        return host
    return ".".join(labels[-(best + 1):])


def normalize_url(base: str, href: str) -> str | None:
    """Resolve and canonicalize an outgoing link; None for anything that is
    not a fetchable http(s) URL."""
    href = href.strip()
    if not href:
        return None
    try:
        joined = urljoin(base, href)
        parts = urlsplit(joined)
    except ValueError:
        return None
    scheme = parts.scheme.lower()
    if scheme not in ("http", "https"):
        return None
    host = (parts.hostname or "").lower()
    if not host:
        return None
    port = parts.port
    netloc = host
    if port is not None and str(port) != _DEFAULT_PORTS.get(scheme):
        netloc = f"{host}:{port}"
    path = parts.path or "/"
    query = urlencode(sorted(parse_qsl(parts.query, keep_blank_values=True)))
    return urlunsplit((scheme, netloc, path, query, ""))


def _strip_session_params(query: str, patterns: tuple[str, ...]) -> str:
    if not query:
        return query
    kept = []
    for key, value in parse_qsl(query, keep_blank_values=True):
        lowered = key.lower()
        drop = False
        for pat in patterns:
            if pat.endswith("*"):
                if lowered.startswith(pat[:-1]):
                    drop = True
                    break
            elif lowered == pat:
                drop = True
                break
        if not drop:
            kept.append((key, value))
    return urlencode(sorted(kept))


def apply_rules(url: str, rules: LinkRules) -> str | None:
    """Exclude or transform one normalized URL; None means 'do not crawl'."""
    parts = urlsplit(url)
    host = parts.hostname or ""
    tld = host.rsplit(".", 1)[-1]
    if tld in rules.excluded_tlds:
        return None
    last_segment = parts.path.rsplit("/", 1)[-1]
    if "." in last_segment:
        ext = last_segment.rsplit(".", 1)[-1].lower()
        if ext in rules.excluded_extensions:
            return None
    if registrable_domain(host, rules.public_suffixes) in rules.domain_blacklist:
        return None
    query = _strip_session_params(parts.query, rules.strip_params)
    netloc = parts.netloc
    for pattern, replacement in rules.host_rewrites:
        new_host, n = pattern.subn(replacement, host)
        if n:
            port = f":{parts.port}" if parts.port else ""
            netloc = new_host + port
            break
    return urlunsplit((parts.scheme, netloc, parts.path, query, ""))


_DEFAULT_SUFFIXES = load_public_suffixes()
