import pytest

from webharvest.extract import (
    Fetcher,
    FetchError,
    HttpStatusError,
    NonTextContent,
    extract_blocks,
    extract_links,
    page_text,
)
from fixture_web import FixtureServer


NAV_HTML = """
<html><body>
<nav><a href="/a">Home</a> <a href="/b">Forum</a> <a href="/c">Chat</a></nav>
<div>
  <a href="/x">eis</a> <a href="/y">zwöi</a> <a href="/z">drü</a>
</div>
<p>{para}</p>
</body></html>
"""

LONG_PARA = (
    "Das isch es richtig langs Textstück mit vielne Wörter und Sätz wo würkli "
    "über zweihundert Zeiche lang isch, demit d Klassifikation das sicher als "
    "guete Block erkennt und sicher nöd als churze Block abtuet, gäll."
)


def test_nav_block_is_bad():
    blocks = extract_blocks(NAV_HTML.format(para=LONG_PARA))
    link_block = [b for b in blocks if "eis" in b.text][0]
    assert link_block.link_density == 1.0
    assert link_block.classification == "bad"


def test_long_paragraph_is_good():
    blocks = extract_blocks(NAV_HTML.format(para=LONG_PARA))
    good = [b for b in blocks if b.classification == "good"]
    assert len(good) == 1
    assert good[0].text == LONG_PARA
    assert good[0].char_count == len(LONG_PARA)
    assert good[0].link_density == 0.0


def test_short_block_promoted_between_good_blocks():
    html = f"<p>{LONG_PARA}</p><p>Churzer Satz dezwüsche.</p><p>{LONG_PARA} Nomal.</p>"
    blocks = extract_blocks(html)
    assert [b.classification for b in blocks] == ["good", "good", "good"]


def test_short_block_alone_stays_short():
    html = "<p>Churzer Satz eleige.</p>"
    blocks = extract_blocks(html)
    assert blocks[0].classification == "short"
    assert page_text(blocks) == ""


def test_table_nav_header_footer_dropped():
    html = f"""
    <html><body>
    <header>Kopfzeile mit Branding</header>
    <nav>Menü Eintrag</nav>
    <table><tr><td>Zelle eins</td><td>Zelle zwei</td></tr></table>
    <p>{LONG_PARA}</p>
    <footer>Fusszeile Impressum</footer>
    </body></html>
    """
    text = page_text(extract_blocks(html))
    for forbidden in ["Kopfzeile", "Menü Eintrag", "Zelle", "Fusszeile"]:
        assert forbidden not in text
    assert LONG_PARA in text


def test_script_style_dropped():
    html = f"<script>var x = 'sichtbar?';</script><style>p {{}}</style><p>{LONG_PARA}</p>"
    text = page_text(extract_blocks(html))
    assert "sichtbar" not in text
    assert LONG_PARA in text


def test_hidden_elements_dropped():
    html = (
        f'<p>{LONG_PARA}<span style="display: none">GEHEIM</span></p>'
        f'<div hidden><p>AUCH GEHEIM</p></div>'
        f'<p style="visibility:hidden">NOCHMAL GEHEIM</p>'
    )
    text = page_text(extract_blocks(html))
    assert "GEHEIM" not in text
    assert LONG_PARA in text


def test_no_text_fabrication():
    html = NAV_HTML.format(para=LONG_PARA)
    for block in extract_blocks(html):
        for word in block.text.split():
            assert word in html


def test_document_order_preserved():
    html = f"<p>{LONG_PARA} eis</p><p>{LONG_PARA} zwöi</p><p>{LONG_PARA} drü</p>"
    text = page_text(extract_blocks(html))
    assert text.index("eis") < text.index("zwöi") < text.index("drü")


def test_unparseable_input_gives_empty():
    assert extract_blocks("") == []
    assert page_text([]) == ""


def test_br_splits_blocks():
    html = f"<div>{LONG_PARA}<br>{LONG_PARA} zweite Zeile</div>"
    blocks = extract_blocks(html)
    assert len([b for b in blocks if b.classification == "good"]) == 2


def test_extract_links_order_and_dedup():
    html = (
        '<nav><a href="/a">A</a></nav>'
        '<p><a href="/b">B</a> <a href="/a">A nomal</a> <a href="http://x.ch/c">C</a></p>'
    )
    assert extract_links(html) == ["/a", "/b", "http://x.ch/c"]


# -- fetching against the fixture server ------------------------------------------

@pytest.fixture(scope="module")
def server():
    s = FixtureServer().start()
    yield s
    s.stop()


@pytest.fixture()
def fetcher(server):
    f = Fetcher(transport_rewriter=server.transport_rewriter, timeout=5.0)
    yield f
    f.close()


def test_fetch_transcodes_declared_charset(fetcher):
    result = fetcher.fetch("http://mixed.test/a")
    assert result.status == 200
    assert "würkli" in result.body  # ISO-8859-1 bytes decoded correctly
    assert result.url == "http://mixed.test/a"


def test_fetch_404_is_distinct_error(fetcher):
    with pytest.raises(HttpStatusError) as exc_info:
        fetcher.fetch("http://gsw-forum.test/does-not-exist")
    assert exc_info.value.status == 404
    assert exc_info.value.kind == "http-status"


def test_fetch_follows_redirect_to_final_url(fetcher):
    result = fetcher.fetch("http://gsw-forum.test/redirect")
    assert result.url == "http://gsw-forum.test/thread1"
    assert "Thread 1" in result.body


def test_fetch_rejects_non_text(fetcher):
    with pytest.raises(NonTextContent):
        fetcher.fetch("http://gsw-forum.test/docs/file.pdf")


def test_fetch_network_error_kind():
    f = Fetcher(timeout=0.2)
    with pytest.raises(FetchError) as exc_info:
        f.fetch("http://127.0.0.1:1/nothing-listens-here")
    assert exc_info.value.kind in ("network", "timeout")
    f.close()
