"""Sentence-level language identification.

The reference model is a character n-gram multinomial with add-k smoothing,
uniform class priors, and longest-match backoff from ``order`` down to single
characters. It is deterministic, trains in seconds at desk scale, and is the
baseline any pluggable external classifier should clear.

Default class scheme (8 classes, target ``GSW``):

    AFR, DEU, ENG, GSW, GSW_LIKE, LTZ, NLD, OTHER

Custom schemes work by passing a different training corpus; the target class
is recorded in the model.

Probability of gram g in class c:  (count_c(g) + k) / (T_c + k * (V_m + 1))
where T_c is the class's total window count and V_m the number of distinct
order-m grams observed across all classes (+1 reserves mass for unseen
grams). Scoring text is NFC-normalized, lowercased, and whitespace-collapsed.
"""

from __future__ import annotations

import gzip
import json
import math
import random
import re
import unicodedata
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from webharvest import kernels

DEFAULT_CLASSES = ("AFR", "DEU", "ENG", "GSW", "GSW_LIKE", "LTZ", "NLD", "OTHER")
DEFAULT_TARGET = "GSW"

_MAGIC = b"WHLID1\n"

_WS = re.compile(r"\s+")


class LidError(ValueError):
    pass


def _prep(text: str) -> str:
    text = unicodedata.normalize("NFC", text).lower()
    return _WS.sub(" ", text).strip()


class LidModel:
    """Trained n-gram statistics plus derived scoring tables."""

    def __init__(
        self,
        classes: tuple[str, ...],
        order: int,
        smoothing: float,
        counts: dict[str, list[dict[str, int]]],
        totals: dict[str, int],
        target_class: str,
    ):
        self.classes = classes
        self.order = order
        self.smoothing = smoothing
        self.counts = counts  # class -> [counts for order 1 .. order]
        self.totals = totals  # class -> total windows per order (identical across orders)
        self.target_class = target_class
        self._build_tables()

    def _build_tables(self) -> None:
        k = self.smoothing
        n_classes = len(self.classes)
        self.vocab_maps: list[dict[str, int]] = []
        self.lognum: list[np.ndarray] = []
        self.vocab_sizes: list[int] = []
        self.logdenom = np.zeros((self.order, n_classes), dtype=np.float64)
        for m in range(1, self.order + 1):
            vocab = sorted({g for cls in self.classes for g in self.counts[cls][m - 1]})
            vmap = {g: i for i, g in enumerate(vocab)}
            mat = np.full((len(vocab), n_classes), math.log(k), dtype=np.float64)
            for ci, cls in enumerate(self.classes):
                for g, c in self.counts[cls][m - 1].items():
                    mat[vmap[g], ci] = math.log(c + k)
                self.logdenom[m - 1, ci] = math.log(
                    self.totals[cls] + k * (len(vocab) + 1)
                )
            self.vocab_maps.append(vmap)
            self.lognum.append(mat)
            self.vocab_sizes.append(len(vocab))

    def log_likelihoods(self, sentence: str) -> np.ndarray:
        prepped = _prep(sentence)
        if not prepped:
            raise LidError("cannot score an empty sentence")
        padded = kernels.BOS * (self.order - 1) + prepped + kernels.EOS
        return kernels.score_positions(
            padded,
            self.order,
            self.vocab_maps,
            self.lognum,
            self.logdenom,
            math.log(self.smoothing),
        )


def train(
    corpus: dict[str, list[str]],
    order: int = 4,
    smoothing: float = 1.0,
    target_class: str = DEFAULT_TARGET,
) -> LidModel:
    """Train the reference model on one sentence list per class."""
    if order < 1:
        raise LidError("order must be at least 1")
    if smoothing <= 0:
        raise LidError("smoothing must be positive")
    if not corpus:
        raise LidError("empty training corpus")
    classes = tuple(sorted(corpus))
    if target_class not in classes:
        raise LidError(f"target class {target_class!r} not in corpus classes")
    counts: dict[str, list[dict[str, int]]] = {}
    totals: dict[str, int] = {}
    for cls in classes:
        prepped = [p for p in (_prep(s) for s in corpus[cls]) if p]
        if not prepped:
            raise LidError(f"class {cls!r} has no usable training sentences")
        per_order: list[dict[str, int]] = []
        for m in range(1, order + 1):
            acc: dict[str, int] = {}
            for text in prepped:
                for g, c in kernels.count_ngrams(text, m).items():
                    acc[g] = acc.get(g, 0) + c
            per_order.append(acc)
        counts[cls] = per_order
        totals[cls] = sum(len(p) + 1 for p in prepped)
    return LidModel(classes, order, smoothing, counts, totals, target_class)


def predict(model: LidModel, sentence: str) -> dict[str, float]:
    """Posterior over classes (uniform prior); sums to 1."""
    logs = model.log_likelihoods(sentence)
    logs = logs - logs.max()
    probs = np.exp(logs)
    probs /= probs.sum()
    return dict(zip(model.classes, probs.tolist()))


def prob_target(model: LidModel, sentence: str) -> float:
    """Probability of the model's target class for one sentence."""
    return predict(model, sentence)[model.target_class]


@dataclass
class EvalResult:
    classes: tuple[str, ...]
    confusion: np.ndarray  # rows: true class, cols: predicted
    accuracy: float

    def as_dict(self) -> dict:
        return {
            "classes": list(self.classes),
            "confusion": self.confusion.tolist(),
            "accuracy": self.accuracy,
        }


def evaluate(model: LidModel, test: dict[str, list[str]]) -> EvalResult:
    """Confusion matrix and accuracy over a held-out labeled sample."""
    if not test or all(not v for v in test.values()):
        raise LidError("empty test set")
    index = {cls: i for i, cls in enumerate(model.classes)}
    confusion = np.zeros((len(model.classes), len(model.classes)), dtype=np.int64)
    for cls, sentences in test.items():
        if cls not in index:
            raise LidError(f"test class {cls!r} unknown to the model")
        for sentence in sentences:
            probs = predict(model, sentence)
            best = max(model.classes, key=lambda c: probs[c])
            confusion[index[cls], index[best]] += 1
    total = int(confusion.sum())
    accuracy = float(np.trace(confusion)) / total
    return EvalResult(model.classes, confusion, accuracy)


def split_corpus(
    corpus: dict[str, list[str]],
    ratios: tuple[float, float, float] = (0.75, 0.10, 0.15),
    rng_seed: int = 0,
) -> tuple[dict[str, list[str]], dict[str, list[str]], dict[str, list[str]]]:
    """Deterministic per-class train/dev/test split (default 75/10/15)."""
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise LidError("split ratios must sum to 1")
    rng = random.Random(rng_seed)
    train_c: dict[str, list[str]] = {}
    dev_c: dict[str, list[str]] = {}
    test_c: dict[str, list[str]] = {}
    for cls in sorted(corpus):
        sentences = list(corpus[cls])
        rng.shuffle(sentences)
        n = len(sentences)
        n_train = int(n * ratios[0])
        n_dev = int(n * (ratios[0] + ratios[1])) - n_train
        train_c[cls] = sentences[:n_train]
        dev_c[cls] = sentences[n_train : n_train + n_dev]
        test_c[cls] = sentences[n_train + n_dev :]
    return train_c, dev_c, test_c


def save_model(model: LidModel, path: str | Path) -> None:
    payload = {
        "version": 1,
        "order": model.order,
        "smoothing": model.smoothing,
        "classes": list(model.classes),
        "target_class": model.target_class,
        "totals": model.totals,
        "counts": model.counts,
    }
    blob = gzip.compress(json.dumps(payload, sort_keys=True).encode("utf-8"))
    Path(path).write_bytes(_MAGIC + blob)


def load_model(path: str | Path) -> LidModel:
    raw = Path(path).read_bytes()
    if not raw.startswith(_MAGIC):
        raise LidError(f"{path}: not a webharvest LID model (bad magic)")
    payload = json.loads(gzip.decompress(raw[len(_MAGIC):]).decode("utf-8"))
    if payload.get("version") != 1:
        raise LidError(f"{path}: unsupported model version {payload.get('version')}")
    return LidModel(
        classes=tuple(payload["classes"]),
        order=int(payload["order"]),
        smoothing=float(payload["smoothing"]),
        counts=payload["counts"],
        totals=payload["totals"],
        target_class=payload["target_class"],
    )
