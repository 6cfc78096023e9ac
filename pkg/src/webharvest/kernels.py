"""Kernel selection: compiled extension if built, pure Python otherwise.

Set ``WEBHARVEST_PURE=1`` to force the Python implementation (used by tests
and the benchmark to compare both paths).
"""

from __future__ import annotations

import os

if os.environ.get("WEBHARVEST_PURE") == "1":
    from webharvest import _kernels_py as _impl
else:
    try:
        from webharvest import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from webharvest import _kernels_py as _impl

IMPLEMENTATION: str = _impl.IMPLEMENTATION
BOS: str = _impl.BOS
EOS: str = _impl.EOS
count_ngrams = _impl.count_ngrams
score_positions = _impl.score_positions
