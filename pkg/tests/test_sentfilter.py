import random

import pytest

from webharvest.sentfilter import (
    FilterVerdict,
    RuleLoadError,
    check,
    expand_pattern,
    load_rules,
)

# a sentence that satisfies every default rule
CLEAN = "Das isch en ganz normale Satz wo alles erfüllt."


def test_default_rules_count(default_rules):
    assert len(default_rules) >= 20


def test_default_rule_ids_present(default_rules):
    ids = {r.id for r in default_rules}
    assert {"max_hashtags", "max_word_length", "caps_ratio"} <= ids


def test_clean_sentence_passes(default_rules):
    verdict = check(CLEAN, default_rules)
    assert verdict.passed
    assert verdict.failed_rule_ids == ()


def test_empty_rules_file_passes_everything(tmp_path):
    f = tmp_path / "rules.yaml"
    f.write_text("")
    rules = load_rules(f)
    assert rules == []
    assert check("@@@@ ####", rules).passed


def test_malformed_pattern_names_rule(tmp_path):
    f = tmp_path / "rules.yaml"
    f.write_text("- id: broken\n  kind: count_bound\n  pattern: '('\n  max: 1\n")
    with pytest.raises(RuleLoadError, match="broken"):
        load_rules(f)


def test_duplicate_ids_rejected(tmp_path):
    f = tmp_path / "rules.yaml"
    f.write_text(
        "- id: a\n  kind: length_bound\n  min: 1\n"
        "- id: a\n  kind: length_bound\n  max: 10\n"
    )
    with pytest.raises(RuleLoadError, match="duplicate"):
        load_rules(f)


def test_rule_without_bounds_rejected(tmp_path):
    f = tmp_path / "rules.yaml"
    f.write_text("- id: a\n  kind: count_bound\n  pattern: x\n")
    with pytest.raises(RuleLoadError, match="min/max"):
        load_rules(f)


# -- the three named rules, exactly at their boundaries ------------------------

def test_hashtag_boundary(default_rules):
    one = "Es git hüt #eis tolle Sache z verzelle im Forum."
    two = "#a und #b sind hüt da gsi im grosse Forum dehei."
    assert "max_hashtags" not in check(one, default_rules).failed_rule_ids
    assert "max_hashtags" in check(two, default_rules).failed_rule_ids


def test_word_length_boundary(default_rules):
    word30 = "abcdefghijklmnopqrstuvwxyzabcd"
    word31 = word30 + "e"
    assert len(word30) == 30 and len(word31) == 31
    ok = f"Das wort {word30} isch grad no erlaubt gsi."
    bad = f"Das wort {word31} isch jetzt z lang gsi."
    assert "max_word_length" not in check(ok, default_rules).failed_rule_ids
    assert "max_word_length" in check(bad, default_rules).failed_rule_ids


def test_caps_ratio_boundary(default_rules):
    # 3 capitalized / 2 lowercase = 1.5 -> must fail ("below 1.5" passes)
    at_limit = "Hans Peter Müller wohnt dehei"
    below = "Hans Peter Müller wohnt ruhig dehei"  # 3/3 = 1.0
    assert "caps_ratio" in check(at_limit, default_rules).failed_rule_ids
    assert "caps_ratio" not in check(below, default_rules).failed_rule_ids


def test_caps_ratio_spec_example(default_rules):
    verdict = check("DER HUND BELLT jetzt", default_rules)
    assert "caps_ratio" in verdict.failed_rule_ids


def test_hashtag_spec_example(default_rules):
    verdict = check("#a und #b sind da", default_rules)
    assert "max_hashtags" in verdict.failed_rule_ids


# -- engine behaviour -----------------------------------------------------------

def test_all_violations_reported(default_rules):
    # trips length, words, hashtags at once; verdict lists them all
    verdict = check("#a #b", default_rules)
    assert not verdict.passed
    assert "max_hashtags" in verdict.failed_rule_ids
    assert "min_chars" in verdict.failed_rule_ids
    assert "min_words" in verdict.failed_rule_ids


def test_verdict_consistency(default_rules):
    for s in [CLEAN, "#a #b", "x", "EIS ZWO DREI vier"]:
        v = check(s, default_rules)
        assert v.passed == (len(v.failed_rule_ids) == 0)
        assert isinstance(v, FilterVerdict)


def test_monotonic_over_rule_subsets(default_rules):
    rng = random.Random(11)
    sentences = [
        CLEAN,
        "#zwei #tags und susch nüt gschids da dinne gäll.",
        "DIESE ZEILE SCHREIT MICH SO laut an heute.",
        "kurz",
        "Es Sätzli wo eigentlich ganz vernünftig usgseht hüt.",
        "1234567890 123456789012 und no chli text dezue.",
    ]
    for _ in range(200):
        subset = [r for r in default_rules if rng.random() < 0.5]
        superset = subset + [r for r in default_rules if r not in subset and rng.random() < 0.5]
        for s in sentences:
            if check(s, superset).passed:
                assert check(s, subset).passed


def test_unicode_class_expansion():
    pat = expand_pattern(r"\p{Lu}")
    import re

    compiled = re.compile(pat)
    assert compiled.match("Ä")
    assert compiled.match("Z")
    assert not compiled.match("ä")
    assert not compiled.match("3")
