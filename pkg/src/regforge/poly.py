"""Univariate polynomials with rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence


def _frac(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


class RatPolynomial:
    """Immutable polynomial over Q, coefficients stored constant term first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def x(cls) -> "RatPolynomial":
        return cls((0, 1))

    @classmethod
    def constant(cls, c) -> "RatPolynomial":
        return cls((c,))

    @property
    def degree(self) -> int:
        # deg(0) = -1 by convention
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, RatPolynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == RatPolynomial((other,)).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"RatPolynomial({[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}" + (f"*{mono}" if mono else "")
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    def _coerce(self, other) -> "RatPolynomial":
        if isinstance(other, RatPolynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return RatPolynomial((other,))
        raise TypeError(f"cannot combine RatPolynomial with {type(other).__name__}")

    def __add__(self, other) -> "RatPolynomial":
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return RatPolynomial(
            (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)
        )

    __radd__ = __add__

    def __neg__(self) -> "RatPolynomial":
        return RatPolynomial(-c for c in self.coeffs)

    def __sub__(self, other) -> "RatPolynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "RatPolynomial":
        return self._coerce(other) - self

    def __mul__(self, other) -> "RatPolynomial":
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return RatPolynomial()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
        return RatPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "RatPolynomial":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = RatPolynomial((1,))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other) -> tuple["RatPolynomial", "RatPolynomial"]:
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        lead = other.leading
        if len(rem) - 1 < db:
            return RatPolynomial(), self
        quot = [Fraction(0)] * (len(rem) - db)
        for i in range(len(rem) - 1, db - 1, -1):
            c = rem[i]
            if c == 0:
                continue
            q = c / lead
            quot[i - db] = q
            for j, bj in enumerate(other.coeffs):
                rem[i - db + j] -= q * bj
        return RatPolynomial(quot), RatPolynomial(rem[:db])

    def __floordiv__(self, other) -> "RatPolynomial":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "RatPolynomial":
        return divmod(self, other)[1]

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "RatPolynomial":
        return RatPolynomial(i * c for i, c in enumerate(self.coeffs) if i)

    def monic(self) -> "RatPolynomial":
        if self.is_zero():
            return self
        lead = self.leading
        return RatPolynomial(c / lead for c in self.coeffs)

    def is_monic(self) -> bool:
        return self.leading == 1

    def primitive_integer(self) -> list[int]:
        """Integer coefficients with content 1 and positive leading coefficient."""
        if self.is_zero():
            return []
        den = reduce(lcm, (c.denominator for c in self.coeffs), 1)
        ints = [int(c * den) for c in self.coeffs]
        g = reduce(gcd, ints, 0)
        ints = [c // g for c in ints]
        if ints[-1] < 0:
            ints = [-c for c in ints]
        return ints

    def gcd(self, other: "RatPolynomial") -> "RatPolynomial":
        """Monic gcd (zero if both are zero)."""
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def xgcd(self, other: "RatPolynomial"):
        """Return (g, s, t) with s*self + t*other = g, g monic."""
        r0, r1 = self, other
        s0, s1 = RatPolynomial((1,)), RatPolynomial()
        t0, t1 = RatPolynomial(), RatPolynomial((1,))
        while not r1.is_zero():
            q, r = divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        lead = r0.leading
        if lead == 0:
            return r0, s0, t0
        inv = 1 / lead
        return r0 * inv, s0 * inv, t0 * inv

    def squarefree_part(self) -> "RatPolynomial":
        if self.degree <= 0:
            return self.monic()
        g = self.gcd(self.derivative())
        return (self // g).monic()

    def is_squarefree(self) -> bool:
        return self.gcd(self.derivative()).degree == 0


def poly_from_ints(coeffs: Sequence[int]) -> RatPolynomial:
    return RatPolynomial(Fraction(int(c)) for c in coeffs)


def sturm_real_root_count(p: RatPolynomial) -> int:
    """Number of distinct real roots, by a Sturm sequence (exact)."""
    if p.degree <= 0:
        return 0
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        r = -(seq[-2] % seq[-1])
        if r.is_zero():
            break
        seq.append(r)

    def changes(signs):
        s = [x for x in signs if x != 0]
        return sum(1 for u, v in zip(s, s[1:]) if (u > 0) != (v > 0))

    # signs at -inf and +inf come from leading terms
    at_pos = [q.leading for q in seq]
    at_neg = [q.leading * (-1) ** q.degree for q in seq]
    return changes(at_neg) - changes(at_pos)
