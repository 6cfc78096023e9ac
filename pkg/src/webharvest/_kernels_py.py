"""Pure-Python n-gram kernels.

Fallback twin of the compiled extension ``webharvest._kernels``; both expose
the same two functions and must stay behaviour-identical. See
``benchmarks/bench_lid.py`` for the speed comparison.
"""

from __future__ import annotations

import numpy as np

IMPLEMENTATION = "python"

BOS = "\x02"
EOS = "\x03"


def count_ngrams(text: str, order: int) -> dict[str, int]:
    """Count character n-grams of ``order`` over BOS-padded text.

    Padding is ``order - 1`` BOS markers plus one EOS, so every order yields
    exactly ``len(text) + 1`` windows.
    """
    padded = BOS * (order - 1) + text + EOS
    counts: dict[str, int] = {}
    for i in range(len(text) + 1):
        gram = padded[i : i + order]
        counts[gram] = counts.get(gram, 0) + 1
    return counts


def score_positions(
    padded: str,
    max_order: int,
    vocab_maps: list[dict[str, int]],
    lognum: list[np.ndarray],
    logdenom: np.ndarray,
    log_smoothing: float,
) -> np.ndarray:
    """Per-class log-likelihood of a padded sentence.

    Each position contributes the longest n-gram (ending there) seen anywhere
    in training, backing off towards single characters; a character never
    seen at all falls into the unigram unseen slot. ``vocab_maps[m-1]`` maps
    an order-m gram to its row in ``lognum[m-1]`` (rows: grams, cols:
    classes, values: log(count + k)); ``logdenom[m-1, c]`` is
    log(total_m_c + k * vocab_size_m).
    """
    n_classes = logdenom.shape[1]
    acc = np.zeros(n_classes, dtype=np.float64)
    n_positions = len(padded) - (max_order - 1)
    for pos in range(n_positions):
        i = pos + max_order  # exclusive end of the full-order window
        for m in range(max_order, 0, -1):
            row = vocab_maps[m - 1].get(padded[i - m : i])
            if row is not None:
                acc += lognum[m - 1][row]
                acc -= logdenom[m - 1]
                break
        else:
            acc += log_smoothing
            acc -= logdenom[0]
    return acc
