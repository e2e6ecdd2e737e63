"""Schinzel-type norms on R^S and the volumes of their unit balls."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, prod
from typing import Sequence

import numpy as np

from . import kernels

Z99 = 2.5758293035489004  # two-sided 99% normal quantile

DELTA = "schinzel_delta"
NABLA = "generalized_nabla"
ELL1 = "ell1"
NORM_KINDS = (DELTA, NABLA, ELL1)


def validate_partition(partition: Sequence[Sequence[int]], n: int) -> list[list[int]]:
    """Blocks must be nonempty, disjoint, and cover range(n)."""
    blocks = [sorted(int(t) for t in b) for b in partition]
    if any(not b for b in blocks):
        raise ValueError("partition has an empty block")
    seen = [t for b in blocks for t in b]
    if sorted(seen) != list(range(n)):
        raise ValueError(f"partition {partition} does not split range({n}) into disjoint blocks")
    return blocks


def block_ids(partition: Sequence[Sequence[int]], n: int) -> np.ndarray:
    ids = np.empty(n, dtype=np.int64)
    for k, b in enumerate(validate_partition(partition, n)):
        ids[b] = k
    return ids


@dataclass(frozen=True)
class NormTag:
    kind: str
    partition: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self):
        if self.kind not in NORM_KINDS:
            raise ValueError(f"unknown norm kind {self.kind!r}")
        if self.kind == NABLA and self.partition is None:
            raise ValueError("generalized nabla needs a partition")

    def blocks(self, n: int) -> list[list[int]]:
        if self.kind == DELTA:
            return [list(range(n))]
        if self.kind == ELL1:
            return [[i] for i in range(n)]
        return validate_partition(self.partition, n)


def schinzel_delta(x) -> float:
    """1/2 |sum x| + 1/2 sum |x|.  Works on floats, Fractions and RealBalls."""
    x = list(x)
    if not x:
        return 0
    s = x[0]
    a = abs(x[0])
    for t in x[1:]:
        s = s + t
        a = a + abs(t)
    return (abs(s) + a) / 2


def nabla(x, partition) -> float:
    """Sum of Schinzel norms of the projections onto the blocks."""
    x = list(x)
    blocks = validate_partition(partition, len(x))
    total = 0
    for b in blocks:
        total = total + schinzel_delta([x[t] for t in b])
    return total


def l1(x):
    total = 0
    for t in x:
        total = total + abs(t)
    return total


def evaluate_norm(x, tag: NormTag):
    return nabla(x, tag.blocks(len(list(x))))


# -- volumes ----------------------------------------------------------------------


def ball_volume_bounds(n: int) -> tuple[Fraction, Fraction]:
    """(2^n / n!, (2n)! / (n!)^3): the l1 ball and the Schinzel ball."""
    if n < 1:
        raise ValueError("dimension must be >= 1")
    f = factorial(n)
    return Fraction(2 ** n, f), Fraction(factorial(2 * n), f ** 3)


def exact_ball_volume(partition: Sequence[Sequence[int]]) -> Fraction:
    """Volume of the nabla unit ball: prod_i (2 n_i)!/(n_i!)^2 / n!.

    The ball of a sum of norms on a direct sum R^{n_1} + ... + R^{n_L} has
    volume prod(n_i! V_i) / n!, and the Schinzel ball in R^m has volume
    (2m)!/(m!)^3.
    """
    sizes = [len(b) for b in partition]
    n = sum(sizes)
    validate_partition(partition, n)
    num = prod(Fraction(factorial(2 * m), factorial(m) ** 2) for m in sizes)
    return num / factorial(n)


@dataclass(frozen=True)
class VolumeEstimate:
    estimate: float
    half_width: float
    samples: int
    hits: int
    seed: int

    @property
    def interval(self) -> tuple[float, float]:
        return self.estimate - self.half_width, self.estimate + self.half_width


def sample_l1_ball(rng: np.random.Generator, count: int, n: int, radius: float = 2.0) -> np.ndarray:
    """Uniform points of the l1 ball of the given radius (Dirichlet + signs)."""
    e = rng.standard_exponential((count, n + 1))
    pts = e[:, :n] / e.sum(axis=1, keepdims=True)
    signs = rng.integers(0, 2, size=(count, n)) * 2 - 1
    return radius * pts * signs


def ball_volume_mc(partition: Sequence[Sequence[int]], samples: int = 10 ** 6, seed: int = 0,
                   chunk: int = 200_000) -> VolumeEstimate:
    """Monte-Carlo volume of the nabla unit ball.

    Samples come from the l1 ball of radius 2, which contains the nabla ball
    because nabla(x) >= ||x||_1 / 2.  The half-width is a 99% normal interval.
    """
    if samples < 10 ** 4:
        raise ValueError("use at least 10^4 samples")
    n = sum(len(b) for b in partition)
    ids = block_ids(partition, n)
    nblocks = len(partition)
    rng = np.random.Generator(np.random.PCG64(seed))
    hits = 0
    left = samples
    while left:
        m = min(chunk, left)
        pts = sample_l1_ball(rng, m, n)
        hits += kernels.count_inside(pts, ids, nblocks)
        left -= m
    box = 4.0 ** n / factorial(n)
    p = hits / samples
    half = Z99 * (p * (1 - p) / samples) ** 0.5 * box
    return VolumeEstimate(p * box, half, samples, hits, seed)
