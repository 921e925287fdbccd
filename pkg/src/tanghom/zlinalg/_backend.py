"""Select the compiled kernels when available.

Setting ``TANGHOM_PURE=1`` in the environment forces the pure-Python
fallback even when the extension is built.
"""
from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"
kernels = _kernels_py

if os.environ.get("TANGHOM_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled  # type: ignore[attr-defined]
    except ImportError:
        pass
    else:
        kernels = _compiled
        BACKEND = "cython"

gf2_rank = kernels.gf2_rank
normalize_diagonal = _kernels_py.normalize_diagonal


def snf_diagonal(a) -> list[int]:
    """Diagonal of a dense matrix, retrying with Python ints on overflow."""
    try:
        return kernels.snf_diagonal(a)
    except OverflowError:
        return _kernels_py.snf_diagonal(a, check_overflow=False)
