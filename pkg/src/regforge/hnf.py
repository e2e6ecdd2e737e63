"""Integer matrices: column Hermite normal form, lattice index, integer kernels.

Lattices are spanned by the *columns* of a matrix; all operations are right
multiplications by unimodular matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Sequence


class RankDeficientError(ValueError):
    pass


@dataclass(frozen=True)
class IntegerMatrix:
    entries: tuple[tuple[int, ...], ...]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntegerMatrix":
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if rows and len({len(r) for r in rows}) != 1:
            raise ValueError("ragged integer matrix")
        return cls(rows)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[int]]) -> "IntegerMatrix":
        return cls.from_rows(list(zip(*cols)))

    @property
    def nrows(self) -> int:
        return len(self.entries)

    @property
    def ncols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def columns(self) -> list[list[int]]:
        return [list(c) for c in zip(*self.entries)]

    def rows(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        cols = other.columns()
        return IntegerMatrix.from_rows(
            [[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.entries]
        )


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def column_echelon(rows: Sequence[Sequence[int]], track: bool = False):
    """Lower column echelon form by unimodular column operations.

    Returns (cols, pivot_rows, transform) where ``cols`` is the list of
    transformed columns (the first ``len(pivot_rows)`` carry the pivots, the
    rest are zero) and ``transform`` the unimodular matrix as a list of columns
    (None unless ``track``).
    """
    n = len(rows)
    m = len(rows[0]) if n else 0
    cols = [[int(rows[i][j]) for i in range(n)] for j in range(m)]
    u = [[int(i == j) for i in range(m)] for j in range(m)] if track else None
    pivots: list[int] = []
    k = 0
    for i in range(n):
        if k == m:
            break
        for j in range(k + 1, m):
            b = cols[j][i]
            if b == 0:
                continue
            a = cols[k][i]
            g, x, y = _xgcd(a, b)
            p, q = a // g, b // g
            ck, cj = cols[k], cols[j]
            cols[k] = [x * s + y * t for s, t in zip(ck, cj)]
            cols[j] = [q * s - p * t for s, t in zip(ck, cj)]
            if track:
                uk, uj = u[k], u[j]
                u[k] = [x * s + y * t for s, t in zip(uk, uj)]
                u[j] = [q * s - p * t for s, t in zip(uk, uj)]
        if cols[k][i] == 0:
            continue
        if cols[k][i] < 0:
            cols[k] = [-s for s in cols[k]]
            if track:
                u[k] = [-s for s in u[k]]
        piv = cols[k][i]
        # reduce earlier pivot columns modulo the new pivot (keeps entries small)
        for j in range(k):
            f = cols[j][i] // piv
            if f:
                cols[j] = [s - f * t for s, t in zip(cols[j], cols[k])]
                if track:
                    u[j] = [s - f * t for s, t in zip(u[j], u[k])]
        pivots.append(i)
        k += 1
    return cols, pivots, u


def hnf_with_index(m: IntegerMatrix | Sequence[Sequence[int]]) -> tuple[IntegerMatrix, int]:
    """Column HNF of a full-rank lattice in Z^n and its index [Z^n : L].

    The result is square, upper triangular with positive pivots; entries to
    the right of a pivot are reduced into [0, pivot).  The input may have more
    columns than rows (a generating set) but must have rank equal to its row
    count.
    """
    rows = m.rows() if isinstance(m, IntegerMatrix) else [list(r) for r in m]
    n = len(rows)
    if n == 0:
        return IntegerMatrix(()), 1
    # upper-triangular form = lower echelon of the row-and-column reversed matrix
    rev = [list(reversed(r)) for r in reversed(rows)]
    cols, pivots, _ = column_echelon(rev)
    if len(pivots) != n:
        raise RankDeficientError(f"rank {len(pivots)} < {n}: lattice is not full rank")
    lower = [cols[j] for j in range(n)]
    upper_cols = [list(reversed(c)) for c in reversed(lower)]
    h = IntegerMatrix.from_columns(upper_cols)
    index = prod(h.entries[i][i] for i in range(n))
    return h, abs(index)


def integer_kernel(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Basis (as vectors) of the saturated lattice {e in Z^m : A e = 0}."""
    m = len(rows[0]) if rows else 0
    if not rows:
        return [[int(i == j) for i in range(m)] for j in range(m)]
    cols, pivots, u = column_echelon(rows, track=True)
    return [u[j] for j in range(len(pivots), m)]


def integer_rank(vectors: Sequence[Sequence[int]]) -> int:
    if not vectors:
        return 0
    _, pivots, _ = column_echelon([list(r) for r in zip(*vectors)])
    return len(pivots)
