"""Sentence segmentation.

A Moses-style rule splitter adjusted for user-generated text:

* existing newlines are always hard boundaries;
* sentences may start with any character, so terminal punctuation followed
  by whitespace splits even before a lowercase letter;
* ":" and ";" are treated as segmentation *hints*: they split only when both
  resulting segments carry at least ``HINT_MIN_WORDS`` words (keeps "10: 30"
  style tokens and short appositions intact);
* a period after a non-breaking prefix ("z.B.", "Dr.") never splits; prefixes
  annotated #NUMERIC_ONLY# protect the period only in front of a digit;
* an ellipsis run ("...", "…") terminates a sentence only when a letter
  follows, and a run like "!!!???" yields a single boundary.

ASCII emoticons are not boundaries; sentences glued together by ":-)" stay
glued. That is a known, accepted failure mode of rule-based splitting.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

HINT_MIN_WORDS = 4

_NUMERIC_TAG = "#NUMERIC_ONLY#"


@dataclass(frozen=True)
class PrefixTable:
    """Non-breaking prefixes; stored without their trailing period."""

    entries: frozenset[str] = field(default_factory=frozenset)
    numeric_only: frozenset[str] = field(default_factory=frozenset)

    def __contains__(self, token: str) -> bool:
        return token in self.entries


def load_prefixes(paths: list[str | Path]) -> PrefixTable:
    """Union of Moses-format non-breaking prefix files.

    One prefix per line; "#" starts a comment; a trailing #NUMERIC_ONLY#
    marks prefixes that only protect a period before digits.
    """
    entries: set[str] = set()
    numeric: set[str] = set()
    for path in paths:
        text = Path(path).read_text(encoding="utf-8")
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if _NUMERIC_TAG in line:
                prefix = line.split(_NUMERIC_TAG, 1)[0].strip()
                if prefix:
                    prefix = prefix.rstrip(".")
                    numeric.add(prefix)
                    entries.add(prefix)
            else:
                prefix = line.split("#", 1)[0].strip().rstrip(".")
                if prefix:
                    entries.add(prefix)
    if not entries:
        raise ValueError("no prefixes loaded from %s" % [str(p) for p in paths])
    return PrefixTable(entries=frozenset(entries), numeric_only=frozenset(numeric))


def default_prefix_paths() -> list[Path]:
    base = resources.files("webharvest").joinpath("data/nonbreaking_prefixes")
    return [Path(str(base.joinpath(name)))
            for name in ("prefixes.en", "prefixes.de", "prefixes.extra")]


def load_default_prefixes() -> PrefixTable:
    return load_prefixes(default_prefix_paths())


# terminal punctuation run, optional trailing closing quotes/brackets, then
# a single space (lines are whitespace-collapsed before scanning)
_RE_TERMINAL = re.compile(r"([.!?…]+)([\"'»›」』”’)\]]*) ")
_RE_HINT = re.compile(r"([:;]) ")
_RE_TOKEN_BEFORE = re.compile(r"([\w.\-]+)$", re.UNICODE)


def _is_letter(ch: str) -> bool:
    return unicodedata.category(ch).startswith("L")


def _breaks_at(line: str, m: re.Match, prefixes: PrefixTable) -> bool:
    punct = m.group(1)
    nxt = line[m.end():][:1]
    if "…" in punct or punct.count(".") >= 2:
        if "!" not in punct and "?" not in punct:
            # ellipsis: only a following letter makes it terminal
            return bool(nxt) and _is_letter(nxt)
        return True
    if punct == ".":
        tm = _RE_TOKEN_BEFORE.search(line, 0, m.start())
        if tm:
            token = tm.group(1)
            if token in prefixes.numeric_only:
                return not (nxt and nxt.isdigit())
            if token in prefixes.entries:
                return False
    return True


def _split_terminals(line: str, prefixes: PrefixTable) -> list[str]:
    segments = []
    cut = 0
    for m in _RE_TERMINAL.finditer(line):
        if m.start() < cut:
            continue
        if _breaks_at(line, m, prefixes):
            segments.append(line[cut:m.end(2)])
            cut = m.end()
    tail = line[cut:].strip()
    if tail:
        segments.append(tail)
    return segments


def _split_hints(segment: str) -> list[str]:
    for m in _RE_HINT.finditer(segment):
        left = segment[:m.end(1)]
        right = segment[m.end():]
        if len(left.split()) >= HINT_MIN_WORDS and len(right.split()) >= HINT_MIN_WORDS:
            return [left] + _split_hints(right)
    return [segment]


def split_sentences(text: str, prefixes: PrefixTable | None = None) -> list[str]:
    """Segment normalized text into candidate sentences.

    No characters are lost: joining the result with single spaces equals the
    whitespace-collapsed input.
    """
    if prefixes is None:
        prefixes = load_default_prefixes()
    out: list[str] = []
    for raw_line in text.split("\n"):
        line = re.sub(r"\s+", " ", raw_line).strip()
        if not line:
            continue
        for hard in _split_terminals(line, prefixes):
            out.extend(_split_hints(hard))
    return out
