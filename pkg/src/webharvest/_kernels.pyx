# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled n-gram kernels; behaviour-identical twin of ``_kernels_py``."""

import numpy as np

IMPLEMENTATION = "cython"

BOS = "\x02"
EOS = "\x03"


def count_ngrams(str text, int order):
    """Count character n-grams of ``order`` over BOS-padded text."""
    cdef str padded = BOS * (order - 1) + text + EOS
    cdef dict counts = {}
    cdef Py_ssize_t i, n = len(text) + 1
    cdef str gram
    for i in range(n):
        gram = padded[i : i + order]
        if gram in counts:
            counts[gram] = counts[gram] + 1
        else:
            counts[gram] = 1
    return counts


def score_positions(
    str padded,
    int max_order,
    list vocab_maps,
    list lognum,
    double[:, :] logdenom,
    double log_smoothing,
):
    """Per-class log-likelihood of a padded sentence (longest-match backoff)."""
    cdef int n_classes = logdenom.shape[1]
    acc_arr = np.zeros(n_classes, dtype=np.float64)
    cdef double[:] acc = acc_arr
    cdef Py_ssize_t n_positions = len(padded) - (max_order - 1)
    cdef Py_ssize_t pos, i, r
    cdef int m, c
    cdef object row
    cdef dict vmap
    cdef double[:, :] mat
    for pos in range(n_positions):
        i = pos + max_order
        for m in range(max_order, 0, -1):
            vmap = <dict>vocab_maps[m - 1]
            row = vmap.get(padded[i - m : i])
            if row is not None:
                r = <Py_ssize_t>row
                mat = lognum[m - 1]
                for c in range(n_classes):
                    acc[c] += mat[r, c] - logdenom[m - 1, c]
                break
        else:
            for c in range(n_classes):
                acc[c] += log_smoothing - logdenom[0, c]
    return acc_arr
