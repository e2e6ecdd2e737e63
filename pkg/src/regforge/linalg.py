"""Exact dense linear algebra over Q (matrices are lists of row lists)."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]


def to_fraction_matrix(rows) -> Matrix:
    return [[c if isinstance(c, Fraction) else Fraction(c) for c in row] for row in rows]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def transpose(m: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*m)] if m else []


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a]


def det(m: Sequence[Sequence]) -> Fraction:
    """Determinant by Gaussian elimination with exact pivoting."""
    a = to_fraction_matrix(m)
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("determinant of a non-square matrix")
    result = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            result = -result
        p = a[col][col]
        result *= p
        for r in range(col + 1, n):
            f = a[r][col]
            if f == 0:
                continue
            f /= p
            row_r, row_c = a[r], a[col]
            for c in range(col, n):
                row_r[c] -= f * row_c[c]
    return result


def rref(m: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    a = to_fraction_matrix(m)
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        a[r] = [x / p for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rank(m: Sequence[Sequence]) -> int:
    if not m:
        return 0
    return len(rref(m)[1])


def solve(a: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    """Solve a x = b for square nonsingular a."""
    n = len(a)
    aug = [list(row) + [b[i]] for i, row in enumerate(to_fraction_matrix(a))]
    red, piv = rref(aug)
    if piv[:n] != list(range(n)) or len(piv) > n:
        raise ValueError("singular or inconsistent system")
    return [red[i][n] for i in range(n)]


def solve_consistent(a: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """Some solution of a x = b (free variables zero), or None if inconsistent."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    aug = [list(row) + [b[i]] for i, row in enumerate(to_fraction_matrix(a))]
    red, piv = rref(aug)
    if cols in piv:
        return None
    x = [Fraction(0)] * cols
    for i, c in enumerate(piv):
        x[c] = red[i][cols]
    return x


def inverse(a: Sequence[Sequence]) -> Matrix:
    n = len(a)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(to_fraction_matrix(a))]
    red, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in red]


def charpoly_coeffs(a: Sequence[Sequence]) -> list[Fraction]:
    """Characteristic polynomial det(xI - a), constant term first (Faddeev-LeVerrier)."""
    m = to_fraction_matrix(a)
    n = len(m)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    mk = identity(n)
    for k in range(1, n + 1):
        am = matmul(m, mk)
        c = -sum((am[i][i] for i in range(n)), Fraction(0)) / k
        coeffs[n - k] = c
        mk = [[am[i][j] + (c if i == j else 0) for j in range(n)] for i in range(n)]
    return coeffs
