"""Page fetching and boilerplate-free text extraction.

The block classifier follows the usual link-density segmentation approach but
deliberately uses no stopword list: blocks are judged only by link density
and length, so it works for languages without curated resources. Navigation,
tables, headers/footers and hidden elements are dropped outright; short
blocks sitting next to good prose are rescued by a context pass.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from datetime import datetime
from html.parser import HTMLParser
from typing import Callable

import requests

from webharvest.models import utcnow

MAX_REDIRECTS = 10
LINK_DENSITY_BAD = 0.4
SHORT_BLOCK_CHARS = 40


class FetchError(Exception):
    """Base fetch failure; ``kind`` lets the decider react per cause."""

    kind = "fetch"

    def __init__(self, url: str, message: str):
        super().__init__(f"{url}: {message}")
        self.url = url


class NetworkError(FetchError):
    kind = "network"


class FetchTimeout(FetchError):
    kind = "timeout"


class NonTextContent(FetchError):
    kind = "content-type"


class HttpStatusError(FetchError):
    kind = "http-status"

    def __init__(self, url: str, status: int):
        super().__init__(url, f"HTTP status {status}")
        self.status = status


class RedirectLoop(FetchError):
    kind = "redirect"


@dataclass(frozen=True)
class FetchResult:
    url: str  # final URL after redirects
    status: int
    body: str
    content_type: str
    fetched_at: datetime = field(default_factory=utcnow)


_META_CHARSET = re.compile(
    rb"""<meta[^>]+charset\s*=\s*["']?\s*([a-zA-Z0-9_\-]+)""", re.IGNORECASE
)


def _decode_body(content: bytes, declared: str | None) -> str:
    """Decode via declared charset, then meta tag, then byte-pattern fallback."""
    candidates = []
    if declared:
        candidates.append(declared)
    m = _META_CHARSET.search(content[:4096])
    if m:
        candidates.append(m.group(1).decode("ascii", "ignore"))
    if content.startswith(b"\xef\xbb\xbf"):
        candidates.append("utf-8-sig")
    candidates += ["utf-8", "cp1252"]
    for enc in candidates:
        try:
            return content.decode(enc)
        except (UnicodeDecodeError, LookupError):
            continue
    return content.decode("latin-1")


class Fetcher:
    """HTTP(S) client with manual redirect handling.

    ``transport_rewriter`` maps a logical URL to the URL actually requested;
    production leaves it unset, tests use it to route fake hosts to a local
    fixture server. Bodies longer than ``max_body_bytes`` are truncated (the
    parser is error-tolerant, and recall beats completeness here).
    """

    def __init__(
        self,
        user_agent: str = "webharvest/0.1",
        timeout: float = 10.0,
        max_body_bytes: int = 2_000_000,
        transport_rewriter: Callable[[str], str] | None = None,
        pre_request: Callable[[str], None] | None = None,
    ):
        self.session = requests.Session()
        self.user_agent = user_agent
        self.timeout = timeout
        self.max_body_bytes = max_body_bytes
        self.transport_rewriter = transport_rewriter
        # called with the logical URL before every request (redirect hops
        # included); the crawler hooks per-domain politeness in here
        self.pre_request = pre_request

    def close(self) -> None:
        self.session.close()

    def fetch(self, url: str) -> FetchResult:
        current = url
        for _ in range(MAX_REDIRECTS + 1):
            if self.pre_request:
                self.pre_request(current)
            transport_url = (
                self.transport_rewriter(current) if self.transport_rewriter else current
            )
            try:
                resp = self.session.get(
                    transport_url,
                    headers={"User-Agent": self.user_agent},
                    timeout=self.timeout,
                    allow_redirects=False,
                    stream=True,
                )
            except requests.Timeout as exc:
                raise FetchTimeout(current, str(exc)) from exc
            except requests.RequestException as exc:
                raise NetworkError(current, str(exc)) from exc
            with resp:
                if resp.is_redirect:
                    location = resp.headers.get("Location")
                    if not location:
                        raise HttpStatusError(current, resp.status_code)
                    current = requests.compat.urljoin(current, location)
                    continue
                if resp.status_code >= 400:
                    raise HttpStatusError(current, resp.status_code)
                content_type = resp.headers.get("Content-Type", "")
                base_type = content_type.split(";", 1)[0].strip().lower()
                if base_type and not (
                    base_type.startswith("text/") or base_type.endswith("xhtml+xml")
                ):
                    raise NonTextContent(current, f"content type {base_type}")
                content = resp.raw.read(self.max_body_bytes, decode_content=True)
                declared = None
                if "charset=" in content_type.lower():
                    declared = content_type.lower().split("charset=", 1)[1].split(";")[0].strip()
                body = _decode_body(content, declared)
                return FetchResult(
                    url=current,
                    status=resp.status_code,
                    body=body,
                    content_type=base_type,
                )
        raise RedirectLoop(url, f"more than {MAX_REDIRECTS} redirects")


# ---------------------------------------------------------------------------
# Block extraction
# ---------------------------------------------------------------------------

@dataclass
class TextBlock:
    text: str
    link_density: float
    char_count: int
    tag_path: str
    classification: str  # good | bad | short


_DROP_TAGS = {
    "script", "style", "noscript", "iframe", "svg", "canvas", "template",
    "nav", "table", "header", "footer", "form", "select", "option",
    "button", "textarea", "head", "title",
}
_BLOCK_TAGS = {
    "p", "div", "h1", "h2", "h3", "h4", "h5", "h6", "li", "dt", "dd",
    "blockquote", "pre", "article", "section", "main", "aside",
    "figcaption", "summary", "ul", "ol", "dl", "body",
}
_VOID_TAGS = {"br", "hr", "img", "input", "meta", "link", "area", "base",
              "col", "embed", "source", "track", "wbr"}

_HIDDEN_STYLE = re.compile(r"display\s*:\s*none|visibility\s*:\s*hidden", re.IGNORECASE)
_COLLAPSE = re.compile(r"\s+")


def _is_hidden(attrs: list[tuple[str, str | None]]) -> bool:
    for name, value in attrs:
        if name == "hidden":
            return True
        if name == "style" and value and _HIDDEN_STYLE.search(value):
            return True
    return False


class _BlockParser(HTMLParser):
    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.stack: list[tuple[str, bool, bool]] = []  # (tag, dropped, hidden)
        self.drop_depth = 0
        self.link_depth = 0
        self.pieces: list[str] = []
        self.link_pieces: list[str] = []
        self.blocks: list[TextBlock] = []
        self.links: list[str] = []
        self._seen_links: set[str] = set()

    def _path(self) -> str:
        return ".".join(tag for tag, _, _ in self.stack) or "(root)"

    def _flush(self) -> None:
        text = _COLLAPSE.sub(" ", " ".join(self.pieces)).strip()
        self.pieces = []
        link_text = _COLLAPSE.sub(" ", " ".join(self.link_pieces)).strip()
        self.link_pieces = []
        if not text:
            return
        density = min(1.0, len(link_text) / max(1, len(text)))
        self.blocks.append(
            TextBlock(
                text=text,
                link_density=density,
                char_count=len(text),
                tag_path=self._path(),
                classification="",
            )
        )

    def handle_starttag(self, tag: str, attrs) -> None:
        if tag == "a":
            for name, value in attrs:
                if name == "href" and value and value not in self._seen_links:
                    self._seen_links.add(value)
                    self.links.append(value)
        if tag in _VOID_TAGS:
            if tag == "br":
                self._flush()
            return
        dropped = tag in _DROP_TAGS
        hidden = _is_hidden(attrs)
        if tag in _BLOCK_TAGS:
            self._flush()
        if dropped or hidden:
            self.drop_depth += 1
        if tag == "a":
            self.link_depth += 1
        self.stack.append((tag, dropped, hidden))

    def handle_startendtag(self, tag: str, attrs) -> None:
        self.handle_starttag(tag, attrs)
        if tag not in _VOID_TAGS:
            self.handle_endtag(tag)

    def handle_endtag(self, tag: str) -> None:
        if tag in _VOID_TAGS:
            return
        if not any(t == tag for t, _, _ in self.stack):
            return
        while self.stack:
            if self.stack[-1][0] in _BLOCK_TAGS:
                self._flush()  # before the pop so the path includes the block
            popped, dropped, hidden = self.stack.pop()
            if dropped or hidden:
                self.drop_depth -= 1
            if popped == "a":
                self.link_depth -= 1
            if popped == tag:
                break

    def handle_data(self, data: str) -> None:
        if self.drop_depth > 0 or not data:
            return
        self.pieces.append(data)
        if self.link_depth > 0:
            self.link_pieces.append(data)

    def close(self) -> None:
        super().close()
        self._flush()


def _classify(blocks: list[TextBlock]) -> None:
    for b in blocks:
        if b.link_density > LINK_DENSITY_BAD:
            b.classification = "bad"
        elif b.char_count < SHORT_BLOCK_CHARS:
            b.classification = "short"
        else:
            b.classification = "good"
    # context pass: short blocks adjacent to originally-good prose join it
    base = [b.classification for b in blocks]
    for i, b in enumerate(blocks):
        if base[i] != "short":
            continue
        prev_good = i > 0 and base[i - 1] == "good"
        next_good = i + 1 < len(blocks) and base[i + 1] == "good"
        if prev_good or next_good:
            b.classification = "good"


def extract_blocks(html: str) -> list[TextBlock]:
    """Segment HTML into classified text blocks (document order)."""
    parser = _BlockParser()
    try:
        parser.feed(html)
        parser.close()
    except Exception:
        return []
    blocks = parser.blocks
    _classify(blocks)
    return blocks


def extract_links(html: str) -> list[str]:
    """All anchor hrefs in document order (including navigation), deduplicated."""
    parser = _BlockParser()
    try:
        parser.feed(html)
        parser.close()
    except Exception:
        return []
    return parser.links


def page_text(blocks: list[TextBlock]) -> str:
    """Newline-joined text of the good blocks, document order."""
    return "\n".join(b.text for b in blocks if b.classification == "good")
