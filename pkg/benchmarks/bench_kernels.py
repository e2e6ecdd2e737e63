"""Compiled vs pure-Python kernels on identical inputs.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--points 200000]

Prints one line per (kernel, size) with the best wall time of each backend
and the speedup.  Results are checked for equality before timing is reported.
"""

import argparse
import time

import numpy as np

from regforge import _kernels_py
from regforge.norms import block_ids

try:
    from regforge import _kernels as _kernels_c
except ImportError:  # extension not built
    _kernels_c = None


def best_of(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def bench_count_inside(n, points, repeat, rng):
    part = [list(range(0, n // 2)), list(range(n // 2, n))] if n > 1 else [[0]]
    ids = block_ids(part, n)
    pts = rng.uniform(-1.0, 1.0, size=(points, n))
    tp, a = best_of(lambda: _kernels_py.count_inside(pts, ids, len(part)), repeat)
    tc, b = best_of(lambda: _kernels_c.count_inside(pts, ids, len(part)), repeat)
    assert a == b
    return tp, tc


def bench_enumerate(n, radius, repeat, rng):
    basis = rng.normal(size=(n, n)) + 2 * np.eye(n)
    bounds = np.full(n, radius, dtype=np.int64)
    part = [[i] for i in range(n)]
    ids = block_ids(part, n)
    tp, (cp, fp) = best_of(lambda: _kernels_py.enumerate_box(basis, bounds, ids, len(part), 4.0), repeat)
    tc, (cc, fc) = best_of(lambda: _kernels_c.enumerate_box(basis, bounds, ids, len(part), 4.0), repeat)
    assert sorted(map(tuple, np.asarray(cp).tolist())) == sorted(map(tuple, np.asarray(cc).tolist()))
    return tp, tc


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--points", type=int, default=200_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if _kernels_c is None:
        raise SystemExit("compiled kernels are not built; run pip install -e . --no-build-isolation")
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<28}{'python s':>12}{'cython s':>12}{'speedup':>10}")
    for n in (2, 4, 6):
        tp, tc = bench_count_inside(n, args.points, args.repeat, rng)
        print(f"{f'count_inside n={n}':<28}{tp:12.4f}{tc:12.4f}{tp / tc:10.1f}")
    for n, r in ((2, 40), (3, 10), (4, 4), (5, 2)):
        tp, tc = bench_enumerate(n, r, args.repeat, rng)
        print(f"{f'enumerate_box n={n} box={r}':<28}{tp:12.4f}{tc:12.4f}{tp / tc:10.1f}")


if __name__ == "__main__":
    main()
