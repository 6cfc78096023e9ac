"""A hand-enumerable mini-web served by a local HTTP server.

Logical hosts are encoded in the path: http://127.0.0.1:PORT/<host>/<path>.
The crawler sees logical URLs (http://gsw-forum.test/...) and a transport
rewriter maps them onto the local server. Every request is logged so tests
can assert which hosts/paths were (never) fetched.

Graph (depths with gsw-forum.test/ as the only seed, max_depth 3):

  gsw-forum.test/            depth 0: 4 target sentences -> saved, followed
    -> /thread1              depth 1: 3 sentences -> saved, followed
    -> /thread2              depth 1: 1 sentence  -> saved, NOT followed
    -> /redirect             depth 1: 302 to /thread1 (dup work, 0 new)
    -> german-only.test/artikel  depth 1: 0 sentences -> URL blacklisted
    -> quotes.test/zitate    depth 1: 2 exact duplicates -> saved, NOT followed
    -> blocked.test/page     (domain pre-blacklisted: never admitted)
    -> shop.nl/offers        (excluded TLD: never admitted)
    -> /docs/file.pdf        (excluded extension: never admitted)
  thread1 -> mixed.test/a    depth 2: 5 sentences (ISO-8859-1!) -> followed
  mixed.test/a -> /b /c      depth 3: 3 and 2 sentences; depth cap stops both
  mixed.test/b -> /d         depth 4: never enqueued
  thread2 -> /never          never enqueued (parent not followed)

Pages that must never be visited carry decoy target-language sentences, so
any crawl-logic regression shows up as extra sentences.
"""

from __future__ import annotations

import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import urlsplit

GSW_SENTENCES = [
    "Hüt isch es würkli guet gsi und mir sind zäme go laufe.",
    "Mir händ hüt znacht öppis gässe und es isch würkli guet gsi.",
    "D lüt im dörf händ dr schnee scho am morge gseh.",
    "I dr chuchi hät sii chli chäs und müsli für znüni gha.",
    "Wänn du wotsch chasch hüt no cho und mit eus öppis luege.",
    "Är hät gseit dass är morn nöd cho chan wil är schaffe muess.",
    "Eus gfallts dihei am beste wil d lüt eifach so nätt sind.",
    "Im summer gö mir uf de bärg und im winter a see.",
    "Mini fründe us dr schuel händ hüt zmorge scho gschaffet.",
    "S wätter isch hüt schlächt und drum blibe mir dihei.",
    "Gäll du chasch das au nöd eifach so mache ohni z frage.",
    "Sini chind händ im hüsli es bitzli gspilt und glachet.",
    "Mir luege hüt öppe zäme es früeschtück für znüni a.",
    "Vill lüt händ kei ziit für so sache im alltag.",
    "Dini sache sind no dihei aber du chasch sii morn cho hole.",
    "Hoi zäme ich bi wider dihei und es isch alles guet.",
    "Öpper hät mir gseit dass es morn wider rägne söll.",
    "Die täg sind churz und d nächt sind lang im winter.",
]

DECOY_SENTENCES = [
    "Grüezi mitenand mir fröied eus uf de summer uf em bärg.",
    "Nüt isch so guet wie es znacht mit de beste fründe.",
]

DEU_NOISE = [
    "Die Zeitung hat heute wieder eine lange Geschichte gedruckt.",
    "Wir haben gestern mit den Kindern eine Wohnung besichtigt.",
    "Natürlich können die Menschen ihre Meinung immer wieder ändern.",
    "Der Unterricht beginnt morgen endlich wieder in der Schule.",
]

ENG_NOISE = [
    "The people were really thinking about everything last night.",
    "They should always answer the question together in the morning.",
]

SEED_URL = "http://gsw-forum.test/"
BLOCKED_DOMAIN = "blocked.test"

# the exact sentence set a correct default crawl must store
PLANTED = set(GSW_SENTENCES)

# pages (host, path) that a correct crawl fetches (robots.txt aside)
EXPECTED_FETCHED = {
    ("gsw-forum.test", "/"),
    ("gsw-forum.test", "/thread1"),
    ("gsw-forum.test", "/thread2"),
    ("gsw-forum.test", "/redirect"),
    ("german-only.test", "/artikel"),
    ("quotes.test", "/zitate"),
    ("mixed.test", "/a"),
    ("mixed.test", "/b"),
    ("mixed.test", "/c"),
}

# URLs that end saved (visited with >= 1 accepted sentence)
EXPECTED_SAVED = {
    "http://gsw-forum.test/",
    "http://gsw-forum.test/thread1",
    "http://gsw-forum.test/thread2",
    "http://gsw-forum.test/redirect",
    "http://quotes.test/zitate",
    "http://mixed.test/a",
    "http://mixed.test/b",
    "http://mixed.test/c",
}

EXPECTED_URL_BLACKLISTED = {"http://german-only.test/artikel"}


def _page(title: str, paragraphs: list[str], links: list[tuple[str, str]],
          hidden: str | None = None, junk_table: bool = True) -> str:
    nav = "\n".join(f'<li><a href="{href}">{label}</a></li>' for href, label in links)
    paras = "\n".join(f"<p>{p}</p>" for p in paragraphs)
    hidden_html = (
        f'<p>{GSW_SENTENCES[0][:20]}<span style="display:none">{hidden}</span></p>'
        if hidden
        else ""
    )
    table = (
        "<table><tr><td>Impressum</td><td>Kontakt</td></tr>"
        "<tr><td>AGB und Datenschutz Hinweise</td><td>Copyright 2019</td></tr></table>"
        if junk_table
        else ""
    )
    return f"""<!DOCTYPE html>
<html><head><title>{title}</title></head>
<body>
<header><h1>{title}</h1></header>
<nav><ul>
{nav}
</ul></nav>
<article>
{paras}
{hidden_html}
</article>
{table}
<footer>Seitenleiste Werbung Navigation</footer>
</body></html>
"""


def build_pages() -> dict[tuple[str, str], dict]:
    """(host, path) -> {status, content_type, body(bytes), location}."""
    g = GSW_SENTENCES
    pages: dict[tuple[str, str], dict] = {}

    def add(host: str, path: str, html: str, charset: str = "utf-8",
            content_type: str | None = None) -> None:
        body = html.encode(charset)
        ct = content_type or f"text/html; charset={charset}"
        pages[(host, path)] = {"status": 200, "content_type": ct, "body": body}

    root_links = [
        ("/thread1", "Thread eins"),
        ("/thread2", "Thread zwei"),
        ("http://german-only.test/artikel", "Artikel"),
        ("http://quotes.test/zitate", "Zitate"),
        ("http://blocked.test/page", "Blocked"),
        ("http://shop.nl/offers", "Shop"),
        ("/docs/file.pdf", "Download"),
        ("/redirect", "Weiter"),
    ]
    add("gsw-forum.test", "/", _page(
        "GSW Forum",
        [g[0], g[1], g[2] + " " + g[3], DEU_NOISE[0]],
        root_links,
    ))
    add("gsw-forum.test", "/thread1", _page(
        "Thread 1",
        [g[4], g[5], g[6], DEU_NOISE[1]],
        [("http://mixed.test/a", "Mixed Seite")],
    ))
    add("gsw-forum.test", "/thread2", _page(
        "Thread 2",
        [g[7], ENG_NOISE[0], ENG_NOISE[1]],
        [("/never", "Nie besucht")],
    ))
    pages[("gsw-forum.test", "/redirect")] = {
        "status": 302,
        "content_type": "text/html",
        "body": b"",
        "location": "http://gsw-forum.test/thread1",
    }
    add("gsw-forum.test", "/never", _page(
        "Nie", [DECOY_SENTENCES[0]], [], junk_table=False,
    ))
    pages[("gsw-forum.test", "/docs/file.pdf")] = {
        "status": 200,
        "content_type": "application/pdf",
        "body": b"%PDF-1.4 decoy",
    }

    # ISO-8859-1 page with a hidden span; exercises transcoding + hidden drop
    add("mixed.test", "/a", _page(
        "Mixed A",
        [g[8], g[9], g[10], g[11] + " " + g[12], DEU_NOISE[2]],
        [("/b", "Weiter b"), ("/c", "Weiter c")],
        hidden="unsichtbarer inhalt der nie erscheinen darf",
    ), charset="iso-8859-1")
    add("mixed.test", "/b", _page(
        "Mixed B", [g[13], g[14], g[15]], [("/d", "Tiefer")],
    ))
    add("mixed.test", "/c", _page(
        "Mixed C", [g[16], g[17], DEU_NOISE[3]], [("/e", "Tiefer")],
    ))
    add("mixed.test", "/d", _page("Mixed D", [DECOY_SENTENCES[1]], []))
    add("mixed.test", "/e", _page("Mixed E", [DECOY_SENTENCES[0]], []))

    add("german-only.test", "/artikel", _page(
        "Nur Deutsch", DEU_NOISE, [("/mehr", "Mehr")],
    ))
    add("german-only.test", "/mehr", _page("Mehr", [DECOY_SENTENCES[1]], []))

    add("quotes.test", "/zitate", _page(
        "Zitate", [g[0], g[1]], [("/quelle", "Quelle")],
    ))
    add("quotes.test", "/quelle", _page("Quelle", [DECOY_SENTENCES[0]], []))

    add("blocked.test", "/page", _page(
        "Blocked", [DECOY_SENTENCES[0], DECOY_SENTENCES[1]], [],
    ))
    add("shop.nl", "/offers", _page("Shop", [DECOY_SENTENCES[1]], []))

    robots = "User-agent: *\nDisallow:\n"
    for host in {h for h, _ in pages}:
        pages[(host, "/robots.txt")] = {
            "status": 200,
            "content_type": "text/plain",
            "body": robots.encode(),
        }
    return pages


class FixtureServer:
    """Threaded HTTP server over the fixture pages with a request log."""

    def __init__(self, pages: dict[tuple[str, str], dict] | None = None):
        self.pages = pages or build_pages()
        self.request_log: list[tuple[str, str, float]] = []  # host, path, monotonic
        self._log_lock = threading.Lock()
        outer = self

        class Handler(BaseHTTPRequestHandler):
            def do_GET(self):
                parts = self.path.lstrip("/").split("/", 1)
                host = parts[0]
                path = "/" + (parts[1] if len(parts) > 1 else "")
                with outer._log_lock:
                    outer.request_log.append((host, path, time.monotonic()))
                page = outer.pages.get((host, path))
                if page is None:
                    self.send_response(404)
                    self.send_header("Content-Type", "text/html")
                    self.end_headers()
                    self.wfile.write(b"not found")
                    return
                self.send_response(page["status"])
                self.send_header("Content-Type", page["content_type"])
                if "location" in page:
                    self.send_header("Location", page["location"])
                self.send_header("Content-Length", str(len(page["body"])))
                self.end_headers()
                self.wfile.write(page["body"])

            def log_message(self, *args):  # silence stderr
                pass

        self._server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self.port = self._server.server_address[1]
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)

    def start(self) -> "FixtureServer":
        self._thread.start()
        return self

    def stop(self) -> None:
        self._server.shutdown()
        self._server.server_close()

    def transport_rewriter(self, url: str) -> str:
        parts = urlsplit(url)
        path = parts.path or "/"
        if parts.query:
            path += "?" + parts.query
        return f"http://127.0.0.1:{self.port}/{parts.hostname}{path}"

    def hosts_fetched(self) -> set[str]:
        with self._log_lock:
            return {host for host, _, _ in self.request_log}

    def pages_fetched(self) -> set[tuple[str, str]]:
        with self._log_lock:
            return {(host, path) for host, path, _ in self.request_log
                    if path != "/robots.txt"}
