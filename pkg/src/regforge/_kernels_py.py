"""NumPy fallback for the compiled kernels (same signatures and results)."""

from __future__ import annotations

import itertools

import numpy as np


def _nabla_rows(x: np.ndarray, block: np.ndarray, nblocks: int) -> np.ndarray:
    sums = np.zeros((x.shape[0], nblocks))
    for b in range(nblocks):
        sums[:, b] = x[:, block == b].sum(axis=1)
    return 0.5 * (np.abs(sums).sum(axis=1) + np.abs(x).sum(axis=1))


def enumerate_box(basis, bounds, block, nblocks, limit, chunk: int = 1 << 16):
    basis = np.asarray(basis, dtype=np.float64)
    bounds = np.asarray(bounds, dtype=np.int64)
    block = np.asarray(block, dtype=np.int64)
    n = basis.shape[0]
    ranges = [range(-int(b), int(b) + 1) for b in bounds]
    coeffs, norms = [], []
    it = itertools.product(*ranges)
    while True:
        pts = np.array(list(itertools.islice(it, chunk)), dtype=np.int64).reshape(-1, n)
        if pts.size == 0:
            break
        nz = pts != 0
        first = np.argmax(nz, axis=1)
        lead = pts[np.arange(len(pts)), first]
        pts = pts[lead > 0]
        if not len(pts):
            continue
        vals = _nabla_rows(pts @ basis.T, block, nblocks)
        keep = vals <= limit
        coeffs.append(pts[keep])
        norms.append(vals[keep])
    if coeffs:
        return np.concatenate(coeffs), np.concatenate(norms)
    return np.zeros((0, n), dtype=np.int64), np.zeros(0)


def count_inside(pts, block, nblocks) -> int:
    pts = np.asarray(pts, dtype=np.float64)
    block = np.asarray(block, dtype=np.int64)
    return int((_nabla_rows(pts, block, nblocks) <= 1.0).sum())
