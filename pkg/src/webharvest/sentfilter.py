"""Well-formedness filtering via a declarative rule file.

Three rule kinds:

* ``count_bound``  — number of regex matches must lie within [min, max];
* ``ratio_bound``  — count(pattern) / max(1, count(pattern2)) within bounds;
* ``length_bound`` — character or word count within bounds.

Bounds are inclusive unless ``min_exclusive`` / ``max_exclusive`` is set.
Patterns may use ``\\p{Lu}``, ``\\p{Ll}``, ``\\p{L}``, ``\\p{N}``, ``\\p{P}``;
they are expanded to explicit character classes (Basic Multilingual Plane)
before compiling with the stdlib ``re`` module.

Every rule is evaluated on every sentence — no short-circuit — so a verdict
lists all violations at once.
"""

from __future__ import annotations

import functools
import re
import sys
import unicodedata
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import yaml


class RuleLoadError(ValueError):
    pass


@functools.lru_cache(maxsize=None)
def _charclass(prefix: str) -> str:
    """Character-class body for a unicode category (or category prefix)."""
    ranges: list[tuple[int, int]] = []
    for cp in range(0x10000):
        if unicodedata.category(chr(cp)).startswith(prefix):
            if ranges and ranges[-1][1] == cp - 1:
                ranges[-1] = (ranges[-1][0], cp)
            else:
                ranges.append((cp, cp))
    parts = []
    for lo, hi in ranges:
        if lo == hi:
            parts.append(f"\\u{lo:04x}")
        else:
            parts.append(f"\\u{lo:04x}-\\u{hi:04x}")
    return "".join(parts)


_P_TOKEN = re.compile(r"\\p\{(Lu|Ll|L|N|P)\}")


def expand_pattern(pattern: str) -> str:
    return _P_TOKEN.sub(lambda m: "[" + _charclass(m.group(1)) + "]", pattern)


@dataclass(frozen=True)
class RulePolicy:
    id: str
    kind: str  # count_bound | ratio_bound | length_bound
    pattern: re.Pattern | None = None
    pattern2: re.Pattern | None = None
    min: float | None = None
    max: float | None = None
    min_exclusive: bool = False
    max_exclusive: bool = False
    unit: str = "chars"  # length_bound only: chars | words
    description: str = ""

    def value(self, sentence: str) -> float:
        if self.kind == "length_bound":
            return len(sentence.split()) if self.unit == "words" else len(sentence)
        count = len(self.pattern.findall(sentence))
        if self.kind == "count_bound":
            return count
        denom = max(1, len(self.pattern2.findall(sentence)))
        return count / denom

    def passes(self, sentence: str) -> bool:
        v = self.value(sentence)
        if self.min is not None:
            if v < self.min or (self.min_exclusive and v == self.min):
                return False
        if self.max is not None:
            if v > self.max or (self.max_exclusive and v == self.max):
                return False
        return True


@dataclass(frozen=True)
class FilterVerdict:
    passed: bool
    failed_rule_ids: tuple[str, ...]


def _compile(rule_id: str, pattern: str) -> re.Pattern:
    try:
        return re.compile(expand_pattern(pattern))
    except re.error as exc:
        raise RuleLoadError(f"rule {rule_id}: invalid pattern {pattern!r}: {exc}") from exc


def _build_rule(doc: dict) -> RulePolicy:
    rule_id = doc.get("id")
    if not rule_id:
        raise RuleLoadError("rule without id")
    kind = doc.get("kind")
    if kind not in ("count_bound", "ratio_bound", "length_bound"):
        raise RuleLoadError(f"rule {rule_id}: unknown kind {kind!r}")
    if doc.get("min") is None and doc.get("max") is None:
        raise RuleLoadError(f"rule {rule_id}: needs at least one of min/max")
    pattern = pattern2 = None
    if kind in ("count_bound", "ratio_bound"):
        if "pattern" not in doc:
            raise RuleLoadError(f"rule {rule_id}: missing pattern")
        pattern = _compile(rule_id, doc["pattern"])
    if kind == "ratio_bound":
        if "pattern2" not in doc:
            raise RuleLoadError(f"rule {rule_id}: ratio_bound needs pattern2")
        pattern2 = _compile(rule_id, doc["pattern2"])
    unit = doc.get("unit", "chars")
    if kind == "length_bound" and unit not in ("chars", "words"):
        raise RuleLoadError(f"rule {rule_id}: unit must be chars or words")
    return RulePolicy(
        id=str(rule_id),
        kind=kind,
        pattern=pattern,
        pattern2=pattern2,
        min=doc.get("min"),
        max=doc.get("max"),
        min_exclusive=bool(doc.get("min_exclusive", False)),
        max_exclusive=bool(doc.get("max_exclusive", False)),
        unit=unit,
        description=doc.get("description", ""),
    )


def load_rules(path: str | Path) -> list[RulePolicy]:
    """Load a YAML rule file; empty file means an empty (pass-all) rule set."""
    raw = Path(path).read_text(encoding="utf-8")
    try:
        docs = yaml.safe_load(raw)
    except yaml.YAMLError as exc:
        raise RuleLoadError(f"cannot parse {path}: {exc}") from exc
    if docs is None:
        return []
    if not isinstance(docs, list):
        raise RuleLoadError(f"{path}: expected a list of rules")
    rules = [_build_rule(doc) for doc in docs]
    ids = [r.id for r in rules]
    dupes = {i for i in ids if ids.count(i) > 1}
    if dupes:
        raise RuleLoadError(f"duplicate rule ids: {sorted(dupes)}")
    return rules


def default_rules_path() -> Path:
    return Path(str(resources.files("webharvest").joinpath("data/rules_default.yaml")))


def load_default_rules() -> list[RulePolicy]:
    return load_rules(default_rules_path())


def check(sentence: str, rules: list[RulePolicy]) -> FilterVerdict:
    failed = tuple(r.id for r in rules if not r.passes(sentence))
    return FilterVerdict(passed=not failed, failed_rule_ids=failed)


def main(argv: list[str] | None = None) -> int:
    """`filter-check <file>`: print a per-line verdict (used by the CLI)."""
    args = argv if argv is not None else sys.argv[1:]
    if len(args) != 1:
        print("usage: filter-check <file>", file=sys.stderr)
        return 1
    rules = load_default_rules()
    for line in Path(args[0]).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line:
            continue
        verdict = check(line, rules)
        status = "PASS" if verdict.passed else "FAIL " + ",".join(verdict.failed_rule_ids)
        print(f"{status}\t{line}")
    return 0
