import random
import unicodedata

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from webharvest.textnorm import fix_encoding, normalize, normalize_text


# -- encoding repair ---------------------------------------------------------

def _oracle_repair(text: str) -> str:
    """Independent oracle: encode as Latin-1, decode as UTF-8, accept only if
    valid and the count of suspicious lead/continuation pairs strictly drops."""
    def suspicious(s: str) -> int:
        count = 0
        for a, b in zip(s, s[1:]):
            if 0xC2 <= ord(a) <= 0xF4 and 0x80 <= ord(b) <= 0xBF:
                count += 1
        return count

    try:
        candidate = text.encode("latin-1").decode("utf-8")
    except (UnicodeEncodeError, UnicodeDecodeError):
        return text
    if suspicious(candidate) < suspicious(text):
        return candidate
    return text


MOJIBAKE_SAMPLES = [
    "GrÃ¼ezi",
    "Ã¤Ã¶Ã¼ im SchnÃ¤ggeloch",
    "HÃ¶chschtwahrschiinlich isch das kaputt",
    "CafÃ© au lait",
    "SchÃ¶ne GrÃ¼sse us ZÃ¼ri",
]


@pytest.mark.parametrize("broken", MOJIBAKE_SAMPLES)
def test_fix_encoding_matches_oracle(broken):
    assert fix_encoding(broken) == _oracle_repair(broken)


def test_fix_encoding_example():
    assert fix_encoding("GrÃ¼ezi") == "Grüezi"


def test_fix_encoding_clean_fixed_point():
    assert fix_encoding("Grüezi") == "Grüezi"
    assert fix_encoding("") == ""


def test_fix_encoding_cp1252_sequences():
    # curly apostrophe mojibake needs the Windows-1252 byte map
    assert fix_encoding("donâ€™t") == "don’t"


def test_fix_encoding_double_encoded():
    original = "Grüezi"
    once = original.encode("utf-8").decode("latin-1")
    twice = once.encode("utf-8").decode("latin-1")
    assert fix_encoding(twice) == original


def test_fix_encoding_idempotent_on_samples():
    for s in MOJIBAKE_SAMPLES + ["Grüezi", "plain ascii", ""]:
        fixed = fix_encoding(s)
        assert fix_encoding(fixed) == fixed


def test_fix_encoding_line_local():
    # one unrepairable line must not block the repairable one
    text = "Grüezi — bleibt\nGrÃ¼ezi kaputt"
    fixed = fix_encoding(text)
    assert "Grüezi kaputt" in fixed
    assert "—" in fixed


# -- normalization ------------------------------------------------------------

def test_quote_colon_convention():
    assert normalize("«Grüezi » : mitenand") == "«Grüezi»: mitenand"


def test_quote_open_spacing():
    assert normalize("« Grüezi» zäme") == "«Grüezi» zäme"


def test_emoji_removed():
    assert normalize("Hoi 😀 zäme") == "Hoi zäme"
    assert normalize("gut 👍🏼 gemacht") == "gut gemacht"


def test_ascii_emoticon_kept():
    assert normalize("das isch geil :-)") == "das isch geil :-)"


def test_space_variants_and_invisibles():
    assert normalize("a b​c") == "a bc"


def test_dash_variants():
    assert normalize("a – b — c − d") == "a - b - c - d"


def test_control_chars_stripped_newline_kept():
    assert normalize("a\x07b\ncd") == "ab\ncd"


def test_multiline_collapse():
    assert normalize("  eis  \n\n  zwöi drei  ") == "eis\nzwöi drei"


def test_report_counts():
    text, report = normalize_text("Hoi 😀 zäme")
    assert text == "Hoi zäme"
    assert report.replacements.get("emoji") == 1
    assert report.replacements.get("space_map", 0) >= 1
    assert report.output_len == len(text)
    assert report.input_len >= report.output_len


@settings(max_examples=300, deadline=None)
@given(st.text(max_size=200))
def test_idempotent(s):
    once = normalize(s)
    assert normalize(once) == once


@settings(max_examples=300, deadline=None)
@given(st.text(max_size=200))
def test_no_forbidden_controls_in_output(s):
    out = normalize(s)
    for ch in out:
        cat = unicodedata.category(ch)
        assert not (cat in ("Cc", "Cf") and ch != "\n"), repr(ch)


def _letters_digits(s: str) -> str:
    return "".join(ch for ch in s if ch.isalnum())


@settings(max_examples=300, deadline=None)
@given(st.text(alphabet=st.characters(blacklist_categories=("Mn", "Mc", "Me", "Cs")), max_size=200))
def test_letters_and_digits_preserved(s):
    # for inputs without combining marks, NFC cannot merge letters, so the
    # alphanumeric projection must survive normalization exactly
    s = unicodedata.normalize("NFC", s)
    out = normalize(s)
    assert _letters_digits(out) == _letters_digits(s)


def test_seeded_fuzz_idempotence_quick():
    rng = random.Random(7)
    for _ in range(500):
        s = "".join(chr(rng.randrange(1, 0x2FFF)) for _ in range(rng.randrange(0, 80)))
        once = normalize(s)
        assert normalize(once) == once
