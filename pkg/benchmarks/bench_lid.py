#!/usr/bin/env python3
"""Benchmark: compiled n-gram kernels vs the pure-Python fallback.

Runs training (n-gram counting) and prediction (scoring) over the synthetic
desk corpus with both implementations and reports wall times.

    python benchmarks/bench_lid.py [--per-class 560] [--probes 2000]
"""

from __future__ import annotations

import argparse
import importlib
import os
import statistics
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

import lid_corpus  # noqa: E402


def _reload_webharvest(pure: bool):
    os.environ["WEBHARVEST_PURE"] = "1" if pure else "0"
    for name in list(sys.modules):
        if name.startswith("webharvest"):
            del sys.modules[name]
    kernels = importlib.import_module("webharvest.kernels")
    lid = importlib.import_module("webharvest.lid")
    return kernels, lid


def bench(pure: bool, per_class: int, probe_count: int, repeats: int = 3):
    kernels, lid = _reload_webharvest(pure)
    corpus = lid_corpus.build_corpus(per_class=per_class, rng_seed=42)
    probes = []
    for cls, sentences in corpus.items():
        probes.extend(sentences[: probe_count // len(corpus)])

    train_times, predict_times = [], []
    for _ in range(repeats):
        t0 = time.perf_counter()
        model = lid.train(corpus, order=4)
        train_times.append(time.perf_counter() - t0)

        t0 = time.perf_counter()
        for probe in probes:
            lid.predict(model, probe)
        predict_times.append(time.perf_counter() - t0)

    return {
        "implementation": kernels.IMPLEMENTATION,
        "train_s": statistics.median(train_times),
        "predict_s": statistics.median(predict_times),
        "probes": len(probes),
    }


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--per-class", type=int, default=560)
    parser.add_argument("--probes", type=int, default=2000)
    args = parser.parse_args()

    results = [bench(pure, args.per_class, args.probes) for pure in (True, False)]
    print(f"{'impl':<10} {'train (s)':>10} {'predict (s)':>12} {'probes':>8}")
    for r in results:
        print(f"{r['implementation']:<10} {r['train_s']:>10.3f} {r['predict_s']:>12.3f} "
              f"{r['probes']:>8}")
    if results[0]["implementation"] != results[1]["implementation"]:
        speedup_train = results[0]["train_s"] / results[1]["train_s"]
        speedup_pred = results[0]["predict_s"] / results[1]["predict_s"]
        print(f"\ncompiled speedup: train {speedup_train:.2f}x, predict {speedup_pred:.2f}x")


if __name__ == "__main__":
    main()
