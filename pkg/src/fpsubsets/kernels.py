"""Kernel selection: compiled extension when available, NumPy fallback otherwise.

Set FPSUBSETS_PURE=1 to force the pure implementation (used by the
benchmark and by tests that compare the two).
"""

from __future__ import annotations

import os

from . import _pykernels

if os.environ.get("FPSUBSETS_PURE") == "1":
    impl = _pykernels
else:
    try:
        from . import _ckernels as impl  # type: ignore[no-redef]
    except ImportError:
        impl = _pykernels

COMPILED = impl.COMPILED

lambda_histogram = impl.lambda_histogram
bilinear_chunk = impl.bilinear_chunk
w_max_abs = impl.w_max_abs
w_lex_argmax = impl.w_lex_argmax
ck_max = impl.ck_max
pattern_scan_dense = impl.pattern_scan_dense
pattern_scan_subsets = impl.pattern_scan_subsets
count_subsets_matching = impl.count_subsets_matching
