"""Certified real/complex enclosures and three-valued verdicts.

Real balls wrap :mod:`mpmath` interval arithmetic (outward rounding), so every
result encloses the exact value.  Complex balls are rectangles of two real
balls.
"""

from __future__ import annotations

import os
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from mpmath import iv, mp, mpf

DEFAULT_PRECISION = 128
DEFAULT_PRECISION_CAP = 8192

# interval arithmetic outside an explicit working_precision block would
# otherwise run at mpmath's 53-bit default and silently widen every ball
if iv.prec < DEFAULT_PRECISION:
    iv.prec = DEFAULT_PRECISION


def precision_cap() -> int:
    return int(os.environ.get("REG_FORGE_PRECISION_CAP", DEFAULT_PRECISION_CAP))


@contextmanager
def working_precision(bits: int):
    old_iv, old_mp = iv.prec, mp.prec
    iv.prec = bits
    mp.prec = bits
    try:
        yield
    finally:
        iv.prec, mp.prec = old_iv, old_mp


def _to_iv(x):
    if isinstance(x, RealBall):
        return x.iv
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return iv.mpf(x.numerator)
        return iv.mpf(x.numerator) / iv.mpf(x.denominator)
    if isinstance(x, (int, float, str)):
        return iv.mpf(x)
    return iv.mpf(x)


def _ball_from_mpi(a, b) -> "RealBall":
    from mpmath.libmp import MPZ

    out = RealBall.__new__(RealBall)
    out.iv = iv.make_mpf(((a[0], MPZ(a[1]), a[2], a[3]), (b[0], MPZ(b[1]), b[2], b[3])))
    return out


class RealBall:
    """Closed real interval [lo, hi] guaranteed to contain an exact value."""

    __slots__ = ("iv",)

    def __init__(self, value):
        self.iv = _to_iv(value)

    def __reduce__(self):
        # exact endpoint tuples; mpmath's interval type does not pickle
        a, b = self.iv._mpi_
        return (_ball_from_mpi, ((a[0], int(a[1]), a[2], a[3]), (b[0], int(b[1]), b[2], b[3])))

    @classmethod
    def from_endpoints(cls, lo, hi) -> "RealBall":
        return cls(iv.mpf([lo, hi]))

    @classmethod
    def exact(cls, x) -> "RealBall":
        return cls(x)

    @property
    def lo(self) -> mpf:
        return mp.make_mpf(self.iv._mpi_[0])  # exact endpoint, no rounding

    @property
    def hi(self) -> mpf:
        return mp.make_mpf(self.iv._mpi_[1])

    @property
    def mid(self) -> mpf:
        return mp.make_mpf(self.iv.mid._mpi_[0])

    @property
    def rad(self) -> mpf:
        """Upper bound for half the width."""
        return mp.fsub(self.hi, self.lo, rounding="u") / 2

    def __float__(self) -> float:
        return float(self.iv.mid)

    def __repr__(self) -> str:
        return f"RealBall([{mp.nstr(self.lo, 17)}, {mp.nstr(self.hi, 17)}])"

    def __str__(self) -> str:
        return f"[{mp.nstr(self.lo, 12)}, {mp.nstr(self.hi, 12)}]"

    def __add__(self, other):
        return RealBall(self.iv + _to_iv(other))

    __radd__ = __add__

    def __sub__(self, other):
        return RealBall(self.iv - _to_iv(other))

    def __rsub__(self, other):
        return RealBall(_to_iv(other) - self.iv)

    def __mul__(self, other):
        return RealBall(self.iv * _to_iv(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _to_iv(other)
        if o.a <= 0 <= o.b:
            raise ZeroDivisionError("division by a ball containing zero")
        return RealBall(self.iv / o)

    def __rtruediv__(self, other):
        if self.contains_zero():
            raise ZeroDivisionError("division by a ball containing zero")
        return RealBall(_to_iv(other) / self.iv)

    def __neg__(self):
        return RealBall(-self.iv)

    def __abs__(self):
        return RealBall(abs(self.iv))

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("only integer powers of balls; use exp/log for real exponents")
        if n < 0:
            return 1 / (self ** (-n))
        result = RealBall(1)
        for _ in range(n):
            result = result * self
        return result

    def contains(self, x) -> bool:
        xi = _to_iv(x)
        return bool(self.iv.a <= xi.a and xi.b <= self.iv.b)

    def contains_zero(self) -> bool:
        return bool(self.iv.a <= 0 <= self.iv.b)

    def excludes_zero(self) -> bool:
        return not self.contains_zero()

    def is_positive(self) -> bool:
        return bool(self.iv.a > 0)

    def is_negative(self) -> bool:
        return bool(self.iv.b < 0)

    def overlaps(self, other) -> bool:
        o = _to_iv(other)
        return bool(self.iv.a <= o.b and o.a <= self.iv.b)

    def certainly_lt(self, other) -> bool:
        return bool(self.iv.b < _to_iv(other).a)

    def certainly_le(self, other) -> bool:
        return bool(self.iv.b <= _to_iv(other).a)

    def hull(self, other) -> "RealBall":
        o = _to_iv(other)
        return RealBall(iv.mpf([min(self.iv.a, o.a), max(self.iv.b, o.b)]))

    def integers_inside(self) -> list[int]:
        lo = int(mp.ceil(self.lo))
        hi = int(mp.floor(self.hi))
        return list(range(lo, hi + 1))


def log(x: RealBall) -> RealBall:
    if not x.is_positive():
        raise ValueError(f"log of a ball not certified positive: {x}")
    return RealBall(iv.log(x.iv))


def exp(x: RealBall) -> RealBall:
    return RealBall(iv.exp(x.iv))


def sqrt(x: RealBall) -> RealBall:
    if x.iv.a < 0:
        raise ValueError("sqrt of a ball with negative part")
    return RealBall(iv.sqrt(x.iv))


def log_plus(x: RealBall) -> RealBall:
    """max(0, log x) for a positive ball."""
    lg = log(x)
    lo = max(lg.iv.a, 0)
    hi = max(lg.iv.b, 0)
    return RealBall(iv.mpf([lo, hi]))


def rpow(base: RealBall, exponent: RealBall) -> RealBall:
    """base ** exponent for a positive base and real exponent."""
    return exp(exponent * log(base))


def ball_sum(items) -> RealBall:
    acc = RealBall(0)
    for x in items:
        acc = acc + x
    return acc


def ball_prod(items) -> RealBall:
    acc = RealBall(1)
    for x in items:
        acc = acc * x
    return acc


def const_pi() -> RealBall:
    return RealBall(iv.pi)


class ComplexBall:
    """Rectangle re + i*im with real-ball sides."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=0):
        self.re = re if isinstance(re, RealBall) else RealBall(re)
        self.im = im if isinstance(im, RealBall) else RealBall(im)

    @classmethod
    def around(cls, z, radius) -> "ComplexBall":
        """Square containing the disc |w - z| <= radius."""
        z = mp.mpc(z)
        r = mp.mpf(radius)
        re = iv.mpf([z.real - r, z.real + r]) if r else iv.mpf(z.real)
        im = iv.mpf([z.imag - r, z.imag + r]) if r else iv.mpf(z.imag)
        return cls(RealBall(re), RealBall(im))

    @property
    def mid(self):
        return mp.mpc(self.re.mid, self.im.mid)

    @property
    def rad(self) -> mpf:
        return mp.sqrt(self.re.rad ** 2 + self.im.rad ** 2)

    def __repr__(self) -> str:
        return f"ComplexBall({self.re!r}, {self.im!r})"

    def _lift(self, other) -> "ComplexBall":
        return other if isinstance(other, ComplexBall) else ComplexBall(other)

    def __add__(self, other):
        o = self._lift(other)
        return ComplexBall(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return ComplexBall(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __neg__(self):
        return ComplexBall(-self.re, -self.im)

    def __mul__(self, other):
        o = self._lift(other)
        return ComplexBall(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def abs_sq(self) -> RealBall:
        return RealBall(self.re.iv ** 2 + self.im.iv ** 2)

    def __abs__(self) -> RealBall:
        return sqrt(self.abs_sq())

    def __truediv__(self, other):
        o = self._lift(other)
        den = o.abs_sq()
        num = self * o.conj()
        return ComplexBall(num.re / den, num.im / den)

    def conj(self) -> "ComplexBall":
        return ComplexBall(self.re, -self.im)

    def is_real(self) -> bool:
        return self.im.iv.a == 0 and self.im.iv.b == 0

    def overlaps(self, other: "ComplexBall") -> bool:
        return self.re.overlaps(other.re) and self.im.overlaps(other.im)


# -- verdicts -------------------------------------------------------------------

HOLDS = "holds"
FAILS = "fails"
UNDECIDED = "undecided"
NOT_MET = "hypothesis-not-met"


@dataclass
class Verdict:
    """Outcome of a certified comparison.

    ``holds``/``fails`` are only issued when the compared balls are separated;
    ``tight`` marks a non-strict inequality whose two sides agree to within the
    ball widths (an equality case), which is reported as ``holds``.
    """

    state: str
    lhs: RealBall | None = None
    rhs: RealBall | None = None
    precision: int = 0
    tight: bool = False
    note: str = ""
    details: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.state == HOLDS

    def __bool__(self) -> bool:
        return self.holds

    def margin(self) -> RealBall | None:
        if self.lhs is None or self.rhs is None:
            return None
        return self.rhs - self.lhs


def compare_le(lhs, rhs, precision: int = 0, equality_tol: float | None = None,
               note: str = "") -> Verdict:
    """Certify lhs <= rhs.

    With ``equality_tol`` set, overlapping balls whose difference is narrower
    than the tolerance count as an equality case (tight hold).
    """
    lhs = lhs if isinstance(lhs, RealBall) else RealBall(lhs)
    rhs = rhs if isinstance(rhs, RealBall) else RealBall(rhs)
    if lhs.certainly_le(rhs):
        return Verdict(HOLDS, lhs, rhs, precision, note=note)
    if rhs.certainly_lt(lhs):
        return Verdict(FAILS, lhs, rhs, precision, note=note)
    diff = rhs - lhs
    if equality_tol is not None and diff.contains_zero() and 2 * diff.rad < equality_tol:
        return Verdict(HOLDS, lhs, rhs, precision, tight=True, note=note)
    return Verdict(UNDECIDED, lhs, rhs, precision, note=note)


def compare_lt(lhs, rhs, precision: int = 0, note: str = "") -> Verdict:
    lhs = lhs if isinstance(lhs, RealBall) else RealBall(lhs)
    rhs = rhs if isinstance(rhs, RealBall) else RealBall(rhs)
    if lhs.certainly_lt(rhs):
        return Verdict(HOLDS, lhs, rhs, precision, note=note)
    if rhs.certainly_le(lhs):
        return Verdict(FAILS, lhs, rhs, precision, note=note)
    return Verdict(UNDECIDED, lhs, rhs, precision, note=note)


def equality_tolerance(precision: int) -> float:
    """Width below which overlapping balls are read as an exact equality."""
    return 2.0 ** (-(precision // 2))


def escalate(check: Callable[[int], Verdict], start: int = DEFAULT_PRECISION,
             cap: int | None = None) -> Verdict:
    """Run ``check(bits)`` doubling precision while the result is undecided."""
    cap = precision_cap() if cap is None else cap
    bits = start
    while True:
        with working_precision(bits):
            v = check(bits)
        if v.state != UNDECIDED or bits >= cap:
            v.precision = bits
            return v
        bits = min(2 * bits, cap)


def compare_eq(lhs, rhs, tol: float, precision: int = 0, note: str = "") -> Verdict:
    """Certify |lhs - rhs| < tol; a difference ball excluding zero is a failure."""
    lhs = lhs if isinstance(lhs, RealBall) else RealBall(lhs)
    rhs = rhs if isinstance(rhs, RealBall) else RealBall(rhs)
    diff = rhs - lhs
    if diff.excludes_zero():
        return Verdict(FAILS, lhs, rhs, precision, note=note)
    if max(abs(diff.lo), abs(diff.hi)) < tol:
        return Verdict(HOLDS, lhs, rhs, precision, tight=True, note=note)
    return Verdict(UNDECIDED, lhs, rhs, precision, note=note)


def combine(verdicts, note: str = "") -> str:
    """Conjunction of verdict states: fails dominates, then undecided."""
    states = [v.state for v in verdicts]
    if FAILS in states:
        return FAILS
    if UNDECIDED in states:
        return UNDECIDED
    if NOT_MET in states:
        return NOT_MET
    return HOLDS


# -- ball matrices ------------------------------------------------------------------


def ball_det(rows) -> RealBall:
    """Determinant of a square matrix of balls (Gaussian elimination).

    If elimination meets a pivot ball that contains zero, the Hadamard bound
    [-H, H] is returned instead, which still encloses the determinant.
    """
    a = [[x if isinstance(x, RealBall) else RealBall(x) for x in row] for row in rows]
    n = len(a)
    if n == 0:
        return RealBall(1)
    had = RealBall(1)
    for j in range(n):
        had = had * sqrt(ball_sum(a[i][j] * a[i][j] for i in range(n)))
    result = RealBall(1)
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(a[r][col].mid))
        if a[piv][col].contains_zero():
            return RealBall(iv.mpf([-had.hi, had.hi]))
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            result = -result
        p = a[col][col]
        result = result * p
        for r in range(col + 1, n):
            f = a[r][col] / p
            a[r] = [a[r][c] - f * a[col][c] if c >= col else a[r][c] for c in range(n)]
    return result
