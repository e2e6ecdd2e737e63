"""Kernel selection: the compiled extension when it is importable, else NumPy.

Set REG_FORGE_PURE_PYTHON=1 to force the fallback.
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py
if os.environ.get("REG_FORGE_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled  # type: ignore[attr-defined]

        _impl = _compiled
        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on the build
        pass


def enumerate_box(basis, bounds, block, nblocks: int, limit: float):
    return _impl.enumerate_box(
        np.ascontiguousarray(basis, dtype=np.float64),
        np.ascontiguousarray(bounds, dtype=np.int64),
        np.ascontiguousarray(block, dtype=np.int64),
        int(nblocks),
        float(limit),
    )


def count_inside(pts, block, nblocks: int) -> int:
    return int(_impl.count_inside(
        np.ascontiguousarray(pts, dtype=np.float64),
        np.ascontiguousarray(block, dtype=np.int64),
        int(nblocks),
    ))
