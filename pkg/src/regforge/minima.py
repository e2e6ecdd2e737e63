"""Log lattices and certified successive minima for Schinzel-type norms.

Enumeration is exhaustive inside a rigorous coefficient box: after LLL
reduction (speed only) the reduced basis gives an upper bound R >= lambda_n,
every vector of norm <= R has ||x||_1 <= 2R, and |xi_i| <= 2R max_j |B^-1_ij|
bounds its coordinates.  Floats only prefilter with a generous slack; every
accepted norm is recomputed as a ball.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, floor
from typing import Callable, Sequence

import numpy as np
from mpmath import mp

from .balls import (
    HOLDS,
    UNDECIDED,
    RealBall,
    Verdict,
    ball_det,
    compare_le,
    equality_tolerance,
    precision_cap,
    working_precision,
)
from .hnf import integer_rank
from .kernels import enumerate_box
from .norms import DELTA, NormTag, ball_volume_bounds, block_ids, nabla

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 20_000_000
SLACK_REL = 1e-6
SLACK_ABS = 1e-9


@dataclass
class LogLattice:
    """Lattice spanned by the columns of a real ball matrix.

    ``build(bits)`` recomputes the columns at another precision; it is what
    allows tie resolution by escalation.
    """

    build: Callable[[int], list[list[RealBall]]]
    rank: int
    coordinates: tuple = ()
    partition: tuple[tuple[int, ...], ...] | None = None
    precision: int = 128
    _cache: dict = field(default_factory=dict, repr=False)

    def columns(self, bits: int | None = None) -> list[list[RealBall]]:
        bits = bits or self.precision
        if bits not in self._cache:
            cols = self.build(bits)
            if len(cols) != self.rank or any(len(c) != self.rank for c in cols):
                raise ValueError("log lattice must be square")
            self._cache[bits] = cols
        return self._cache[bits]

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence], partition=None, coordinates=()) -> "LogLattice":
        """Columns of an explicit (rational or float) matrix given by rows."""
        rows = [[Fraction(x) if not isinstance(x, float) else x for x in r] for r in rows]
        n = len(rows)

        def build(bits):
            with working_precision(bits):
                return [[RealBall(rows[i][j]) for i in range(n)] for j in range(n)]

        part = tuple(tuple(b) for b in partition) if partition else None
        return cls(build, n, tuple(coordinates) or tuple(range(n)), part)

    @classmethod
    def from_units(cls, units, rows: Sequence[int], partition=None, precision: int = 128) -> "LogLattice":
        """Columns x(eta) = (d_w log ||eta||_w) for w in ``rows``."""
        from .embeddings import log_vector

        units = list(units)
        rows = list(rows)

        def build(bits):
            cols = []
            for u in units:
                lv = log_vector(u, bits)
                cols.append([lv[w] for w in rows])
            return cols

        part = tuple(tuple(b) for b in partition) if partition else None
        return cls(build, len(units), tuple(rows), part, precision)

    def scaled(self, factor) -> "LogLattice":
        base = self.build

        def build(bits):
            with working_precision(bits):
                return [[x * factor for x in col] for col in base(bits)]

        return LogLattice(build, self.rank, self.coordinates, self.partition, self.precision)

    def determinant(self, bits: int | None = None) -> RealBall:
        cols = self.columns(bits)
        with working_precision(bits or self.precision):
            rows = [[cols[j][i] for j in range(self.rank)] for i in range(self.rank)]
            return abs(ball_det(rows))

    def norm_tag(self, kind: str | None = None) -> NormTag:
        if kind is None:
            kind = "generalized_nabla" if self.partition else DELTA
        if kind == "generalized_nabla":
            return NormTag(kind, self.partition)
        return NormTag(kind)


# -- reduction ------------------------------------------------------------------------


def lll_columns(b: np.ndarray, delta: float = 0.99) -> list[list[int]]:
    """Float LLL on the columns of ``b``; returns the exact unimodular transform
    as a list of integer columns."""
    n = b.shape[1]
    basis = b.astype(float).copy()
    u = [[int(i == j) for i in range(n)] for j in range(n)]

    def gso(mat):
        q = np.zeros_like(mat)
        mu = np.zeros((n, n))
        for i in range(n):
            v = mat[:, i].copy()
            for j in range(i):
                mu[i, j] = mat[:, i] @ q[:, j] / (q[:, j] @ q[:, j])
                v -= mu[i, j] * q[:, j]
            q[:, i] = v
        return q, mu

    q, mu = gso(basis)
    k = 1
    guard = 0
    while k < n and guard < 100_000:
        guard += 1
        for j in range(k - 1, -1, -1):
            c = int(round(mu[k, j]))
            if c:
                basis[:, k] -= c * basis[:, j]
                u[k] = [a - c * bb for a, bb in zip(u[k], u[j])]
                q, mu = gso(basis)
        if q[:, k] @ q[:, k] >= (delta - mu[k, k - 1] ** 2) * (q[:, k - 1] @ q[:, k - 1]):
            k += 1
        else:
            basis[:, [k - 1, k]] = basis[:, [k, k - 1]]
            u[k - 1], u[k] = u[k], u[k - 1]
            q, mu = gso(basis)
            k = max(k - 1, 1)
    return u


def _combine(cols: list[list[RealBall]], coeffs: Sequence[int]) -> list[RealBall]:
    n = len(cols[0])
    out = [RealBall(0)] * n
    for c, col in zip(coeffs, cols):
        if c:
            out = [o + x * int(c) for o, x in zip(out, col)]
    return out


def _inverse_row_bounds(cols: list[list[RealBall]]) -> list:
    """Rigorous c_i >= max_j |B^-1_ij| for the matrix with the given columns."""
    n = len(cols)
    bmid = np.array([[float(cols[j][i].mid) for j in range(n)] for i in range(n)])
    x = np.linalg.inv(bmid)
    # E = I - X B, evaluated in ball arithmetic
    delta = mp.mpf(0)
    for i in range(n):
        row = mp.mpf(0)
        for j in range(n):
            acc = RealBall(int(i == j))
            for k in range(n):
                acc = acc - cols[j][k] * float(x[i, k])
            row += max(abs(acc.lo), abs(acc.hi))
        delta = max(delta, row)
    if delta >= 1:
        raise ArithmeticError("approximate inverse too poor to bound the coordinate box")
    xmax = mp.mpf(float(np.abs(x).max()))
    extra = delta / (1 - delta) * xmax
    return [mp.mpf(float(np.abs(x[i]).max())) + extra for i in range(n)]


# -- successive minima ------------------------------------------------------------------


@dataclass
class MinimaResult:
    minima: list[RealBall]
    vectors: list[tuple[int, ...]]
    state: str
    precision: int
    norm: NormTag
    determinant: RealBall | None = None
    candidates: int = 0
    box: tuple[int, ...] = ()
    note: str = ""

    def minkowski_check(self, volume_lower: Fraction | None = None) -> Verdict:
        """lambda_1 ... lambda_n * Vol_lower <= 2^n |det L|."""
        n = len(self.minima)
        if self.state != HOLDS or self.determinant is None:
            return Verdict(UNDECIDED, note="minima not certified")
        vol = volume_lower if volume_lower is not None else ball_volume_bounds(n)[0]
        with working_precision(self.precision):
            lhs = RealBall(vol)
            for lam in self.minima:
                lhs = lhs * lam
            rhs = self.determinant * 2 ** n
            return compare_le(lhs, rhs, self.precision, equality_tolerance(self.precision),
                              note="Minkowski second theorem")


def _canonical(e: Sequence[int]) -> tuple[int, ...]:
    for t in e:
        if t:
            return tuple(e) if t > 0 else tuple(-s for s in e)
    return tuple(e)


def _norm_ball(vec: list[RealBall], blocks) -> RealBall:
    return nabla(vec, blocks)


def successive_minima(lat: LogLattice, norm: NormTag | str | None = None,
                      budget: int = DEFAULT_BUDGET, precision: int | None = None) -> MinimaResult:
    """Successive minima of ``norm`` on ``lat`` with independent attaining vectors.

    Vectors are exponent tuples on the lattice's original basis.  Ties are
    resolved by raising precision; true ties are broken by lexicographic order
    of the (sign-normalised) exponent vectors.
    """
    if norm is None or isinstance(norm, str):
        norm = lat.norm_tag(norm)
    n = lat.rank
    bits = precision or lat.precision
    blocks = norm.blocks(n)
    ids = block_ids(blocks, n)
    cap = precision_cap()

    with working_precision(bits):
        cols = lat.columns(bits)
        det = lat.determinant(bits)
        if det.contains_zero():
            raise ArithmeticError("log lattice is not certified nonsingular")
        bmid = np.array([[float(cols[j][i].mid) for j in range(n)] for i in range(n)])
        u = lll_columns(bmid)
        red = [_combine(cols, uc) for uc in u]
        red_norms = [_norm_ball(c, blocks) for c in red]
        r_hi = max(x.hi for x in red_norms)
        cbound = _inverse_row_bounds(red)
        box = tuple(int(floor(2 * r_hi * c)) for c in cbound)

    size = 1
    for b in box:
        size *= 2 * b + 1
    ucols = np.array(u, dtype=object).T  # u as columns -> exponent = U @ xi

    def to_exponents(xi) -> tuple[int, ...]:
        return _canonical([int(sum(int(ucols[i][j]) * int(xi[j]) for j in range(n))) for i in range(n)])

    if size // 2 > budget:
        vecs = [to_exponents([int(i == j) for i in range(n)]) for j in range(n)]
        order = sorted(range(n), key=lambda j: red_norms[j].mid)
        return MinimaResult([red_norms[j] for j in order], [vecs[j] for j in order], UNDECIDED, bits,
                            norm, det, 0, box, note=f"enumeration budget exceeded ({size} box points)")

    redf = np.array([[float(red[j][i].mid) for j in range(n)] for i in range(n)])
    limit = float(r_hi) * (1 + SLACK_REL) + SLACK_ABS
    coeffs, fnorms = enumerate_box(redf, np.array(box, dtype=np.int64), ids, len(blocks), limit)
    order = np.argsort(fnorms, kind="stable")
    cands = [(float(fnorms[i]), to_exponents(coeffs[i])) for i in order]
    logger.debug("minima: box %s, %d candidates", box, len(cands))

    def ball_of(e, b):
        with working_precision(b):
            return _norm_ball(_combine(lat.columns(b), e), blocks)

    accepted: list[tuple[int, ...]] = []
    minima: list[RealBall] = []
    state = HOLDS
    note = ""
    pos = 0
    while len(accepted) < n:
        # smallest remaining independent candidate by float norm
        while pos < len(cands) and integer_rank(accepted + [list(cands[pos][1])]) <= len(accepted):
            pos += 1
        if pos >= len(cands):
            raise ArithmeticError("enumeration missed an independent vector; box bound violated")
        fmin = cands[pos][0]
        window = fmin * (1 + SLACK_REL) + SLACK_ABS
        group = []
        for f, e in cands[pos:]:
            if f > window:
                break
            if integer_rank(accepted + [list(e)]) > len(accepted):
                group.append(e)
        b = bits
        while True:
            balls = {e: ball_of(e, b) for e in group}
            best_hi = min(x.hi for x in balls.values())
            ties = [e for e in group if balls[e].lo <= best_hi]
            tol = equality_tolerance(b)
            resolved = all(
                abs(balls[e].mid - balls[ties[0]].mid) + balls[e].rad + balls[ties[0]].rad < tol
                for e in ties
            )
            if len(ties) == 1 or resolved:
                break
            if b >= cap:
                state = UNDECIDED
                note = f"unresolved near-tie at {b} bits"
                break
            b = min(2 * b, cap)
        choice = min(ties)
        accepted.append(choice)
        minima.append(balls[choice])
    return MinimaResult(minima, accepted, state, bits, norm, det, len(cands), box, note)


def minimum_bound_constant(r: int) -> Fraction:
    """2^r (r!)^3 / (2r)! = 2^r / Vol(Schinzel ball)."""
    return Fraction(2 ** r * factorial(r) ** 3, factorial(2 * r))
