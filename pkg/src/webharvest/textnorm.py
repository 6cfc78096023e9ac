"""Text normalization: mojibake repair, emoji/invisible stripping, and
canonical punctuation spacing.

Everything here is pure and idempotent. Letters and digits are never
rewritten (beyond NFC composition and the encoding repair); only symbols,
spacing, and invisible code points are touched.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field


@dataclass
class NormalizationReport:
    input_len: int = 0
    output_len: int = 0
    replacements: dict[str, int] = field(default_factory=dict)

    def bump(self, rule: str, n: int = 1) -> None:
        if n:
            self.replacements[rule] = self.replacements.get(rule, 0) + n


# ---------------------------------------------------------------------------
# Encoding repair (UTF-8 bytes mis-decoded as Latin-1 / Windows-1252)
# ---------------------------------------------------------------------------

# Windows-1252 maps bytes 0x80-0x9F to printable characters (Latin-1 leaves
# them as C1 controls); both forms appear in real mojibake.
_CP1252_EXTRA: dict[str, int] = {}
for _b in range(0x80, 0xA0):
    try:
        _ch = bytes([_b]).decode("cp1252")
    except UnicodeDecodeError:
        _ch = chr(_b)
    _CP1252_EXTRA[_ch] = _b

# A mojibake pair is a UTF-8 lead byte (0xC2-0xF4) shown as a Latin-1 char,
# followed by something that maps back to a continuation byte (0x80-0xBF).
def _is_lead(ch: str) -> bool:
    return 0xC2 <= ord(ch) <= 0xF4


def _cont_byte(ch: str) -> int | None:
    cp = ord(ch)
    if 0x80 <= cp <= 0xBF:
        return cp
    b = _CP1252_EXTRA.get(ch)
    if b is not None and 0x80 <= b <= 0xBF:
        return b
    return None


def _suspicion(text: str) -> int:
    count = 0
    for a, b in zip(text, text[1:]):
        if _is_lead(a) and _cont_byte(b) is not None:
            count += 1
    return count


def _to_single_bytes(text: str) -> bytes | None:
    out = bytearray()
    for ch in text:
        cp = ord(ch)
        if cp <= 0xFF:
            out.append(cp)
        else:
            b = _CP1252_EXTRA.get(ch)
            if b is None:
                return None
            out.append(b)
    return bytes(out)


def _try_repair(text: str) -> str | None:
    before = _suspicion(text)
    if before == 0:
        return None
    raw = _to_single_bytes(text)
    if raw is None:
        return None
    try:
        repaired = raw.decode("utf-8")
    except UnicodeDecodeError:
        return None
    if _suspicion(repaired) >= before:
        return None
    return repaired


def fix_encoding(raw: str) -> str:
    """Repair text that went through a UTF-8 -> Latin-1 decoding accident.

    Conservative by construction: a repair is only accepted when the
    reconstructed bytes decode as valid UTF-8 *and* the count of suspicious
    lead/continuation pairs strictly drops. Repairs run line by line so one
    genuine non-Latin-1 character elsewhere cannot block them, and iterate to
    a fixed point, which also handles doubly-encoded text and makes the whole
    operation idempotent. Anything unrepairable passes through unchanged.
    """
    if not raw:
        return raw
    lines = raw.split("\n")
    fixed_lines = []
    for line in lines:
        while True:
            repaired = _try_repair(line)
            if repaired is None:
                break
            line = repaired
        fixed_lines.append(line)
    return "\n".join(fixed_lines)


# ---------------------------------------------------------------------------
# Unicode normalization
# ---------------------------------------------------------------------------

_EMOJI_RANGES = (
    (0x1F000, 0x1FFFF),  # emoticons, pictographs, transport, flags, ...
    (0x2600, 0x27BF),    # miscellaneous symbols and dingbats
    (0x2B00, 0x2BFF),    # arrows/stars commonly used as emoji
    (0xFE00, 0xFE0F),    # variation selectors
    (0x20E3, 0x20E3),    # combining enclosing keycap
)


def _is_emoji(ch: str) -> bool:
    cp = ord(ch)
    return any(lo <= cp <= hi for lo, hi in _EMOJI_RANGES)


_NEWLINE_CHARS = {" ", " ", "\x85"}
_DASH_EXTRA = {"−"}  # unicode minus sign; category Sm, not Pd

_OPENING_QUOTES = "«‹「『"
_CLOSING_QUOTES = "»›」』"

_RE_SPACE_AFTER_OPEN = re.compile(r"([" + _OPENING_QUOTES + r"]) +")
_RE_SPACE_BEFORE_CLOSE = re.compile(r" +([" + _CLOSING_QUOTES + r"])")
# only for colons used as punctuation; ":-)" style emoticons keep their space
_RE_SPACE_BEFORE_COLON = re.compile(r" +:(?=\s|$)")
_RE_MULTI_SPACE = re.compile(r" {2,}")
_RE_SPACE_AROUND_NL = re.compile(r" *\n+ *")


def normalize_text(raw: str) -> tuple[str, NormalizationReport]:
    """Canonicalize spacing, dashes, quotes and strip emoji/invisibles.

    Newlines survive (the splitter treats them as hard boundaries); runs of
    blank lines collapse to one. ASCII emoticons like ":-)" are deliberately
    left alone — only true emoji code points are removed.
    """
    report = NormalizationReport(input_len=len(raw))
    if not raw:
        return "", report

    text = unicodedata.normalize("NFC", raw)
    text = text.replace("\r\n", "\n").replace("\r", "\n")

    chars: list[str] = []
    for ch in text:
        if ch == "\n":
            chars.append(ch)
            continue
        if ch == "\t":
            chars.append(" ")
            report.bump("space_map")
            continue
        if ch in _NEWLINE_CHARS:
            chars.append("\n")
            report.bump("space_map")
            continue
        if _is_emoji(ch):
            report.bump("emoji")
            continue
        cat = unicodedata.category(ch)
        if cat == "Zs":
            if ch != " ":
                report.bump("space_map")
            chars.append(" ")
            continue
        if cat in ("Cf", "Cc"):
            report.bump("invisible")
            continue
        if cat == "Pd" or ch in _DASH_EXTRA:
            if ch != "-":
                report.bump("dash_map")
            chars.append("-")
            continue
        chars.append(ch)
    text = "".join(chars)

    text, n = _RE_SPACE_AFTER_OPEN.subn(r"\1", text)
    report.bump("quote_spacing", n)
    text, n = _RE_SPACE_BEFORE_CLOSE.subn(r"\1", text)
    report.bump("quote_spacing", n)
    text, n = _RE_SPACE_BEFORE_COLON.subn(":", text)
    report.bump("colon_spacing", n)

    text, n = _RE_MULTI_SPACE.subn(" ", text)
    report.bump("collapse", n)
    text, n = _RE_SPACE_AROUND_NL.subn("\n", text)
    report.bump("collapse", n)
    text = text.strip()

    # stripping joiners between base char and combining mark can expose new
    # compositions, so normalize once more to stay idempotent
    text = unicodedata.normalize("NFC", text)

    report.output_len = len(text)
    return text, report


def normalize(raw: str) -> str:
    """Convenience wrapper returning only the normalized text."""
    return normalize_text(raw)[0]
