"""Number fields given by a monic defining polynomial, and their elements."""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property, reduce
from math import lcm
from typing import Iterable, Sequence

from . import linalg
from .poly import RatPolynomial


class FieldDataError(ValueError):
    """Inconsistent field data (bad card, wrong discriminant, ...)."""


class NumberField:
    """k = Q[x]/(min_poly), with an integral basis given on the power basis.

    ``discriminant`` is the signed field discriminant; ``abs_discriminant``
    is D_k.  Validation (integral basis vs discriminant, signature) happens in
    :meth:`validate`, which loaders call explicitly.
    """

    def __init__(
        self,
        min_poly: RatPolynomial,
        integral_basis: Sequence[Sequence] | None = None,
        discriminant: int | None = None,
        signature: tuple[int, int] | None = None,
        label: str = "",
    ):
        if not min_poly.is_monic() or min_poly.degree < 1:
            raise FieldDataError("defining polynomial must be monic of positive degree")
        self.min_poly = min_poly
        self.degree = d = min_poly.degree
        self.label = label
        if integral_basis is None:
            integral_basis = [[int(i == j) for j in range(d)] for i in range(d)]
        if len(integral_basis) != d or any(len(w) != d for w in integral_basis):
            raise FieldDataError(f"integral basis must have {d} vectors of length {d}")
        self.integral_basis = [FieldElement(self, w) for w in integral_basis]
        self.discriminant = None if discriminant is None else int(discriminant)
        self.signature = None if signature is None else (int(signature[0]), int(signature[1]))

    def __repr__(self) -> str:
        return f"NumberField({self.label or self.min_poly})"

    @property
    def abs_discriminant(self) -> int:
        if self.discriminant is None:
            raise FieldDataError("field has no declared discriminant")
        return abs(self.discriminant)

    @property
    def unit_rank(self) -> int:
        r1, r2 = self.signature
        return r1 + r2 - 1

    # -- construction helpers -------------------------------------------------

    def element(self, coords: Iterable) -> "FieldElement":
        return FieldElement(self, coords)

    def from_int(self, n) -> "FieldElement":
        return FieldElement(self, [n] + [0] * (self.degree - 1))

    @cached_property
    def one(self) -> "FieldElement":
        return self.from_int(1)

    @cached_property
    def zero(self) -> "FieldElement":
        return self.from_int(0)

    @cached_property
    def gen(self) -> "FieldElement":
        if self.degree == 1:
            return self.from_int(-self.min_poly.coeffs[0])
        return FieldElement(self, [0, 1] + [0] * (self.degree - 2))

    def from_poly(self, p: RatPolynomial) -> "FieldElement":
        r = p % self.min_poly
        cs = list(r.coeffs) + [Fraction(0)] * (self.degree - len(r.coeffs))
        return FieldElement(self, cs)

    # -- integral basis -------------------------------------------------------

    @cached_property
    def _basis_matrix(self) -> list[list[Fraction]]:
        # columns are integral basis vectors in power-basis coordinates
        return linalg.transpose([list(w.coords) for w in self.integral_basis])

    @cached_property
    def _basis_inverse(self) -> list[list[Fraction]]:
        try:
            return linalg.inverse(self._basis_matrix)
        except ZeroDivisionError:
            raise FieldDataError("integral basis is linearly dependent") from None

    def integral_coords(self, a: "FieldElement") -> list[Fraction]:
        """Coordinates of ``a`` on the integral basis."""
        return linalg.matvec(self._basis_inverse, a.coords)

    def is_integral(self, a: "FieldElement") -> bool:
        return all(c.denominator == 1 for c in self.integral_coords(a))

    def trace_form_det(self, elems: Sequence["FieldElement"]) -> Fraction:
        """det(Trace(b_i b_j))."""
        gram = [[(x * y).trace() for y in elems] for x in elems]
        return linalg.det(gram)

    def validate(self) -> None:
        """Check the integral basis against the declared discriminant and signature."""
        from .poly import sturm_real_root_count

        d = self.degree
        for w in self.integral_basis:
            if not is_algebraic_integer(w):
                raise FieldDataError(f"integral basis element {w} is not an algebraic integer")
        if not self.min_poly.is_squarefree():
            raise FieldDataError("defining polynomial is not squarefree")
        disc = self.trace_form_det(self.integral_basis)
        if self.discriminant is not None and disc != self.discriminant:
            raise FieldDataError(
                f"discriminant mismatch: computed {disc}, declared {self.discriminant}"
            )
        if self.discriminant is None:
            self.discriminant = int(disc)
        # Z[basis] must be a ring containing 1 and closed under multiplication
        for w in self.integral_basis:
            for v in self.integral_basis:
                if not self.is_integral(w * v):
                    raise FieldDataError("integral basis does not span a ring")
        if not self.is_integral(self.one):
            raise FieldDataError("integral basis does not contain 1")
        r1 = sturm_real_root_count(self.min_poly)
        sig = (r1, (d - r1) // 2)
        if self.signature is not None and self.signature != sig:
            raise FieldDataError(f"signature mismatch: computed {sig}, declared {self.signature}")
        self.signature = sig


class FieldElement:
    """Element of a number field, exact coordinates on 1, a, ..., a^(d-1)."""

    __slots__ = ("field", "coords")

    def __init__(self, field: NumberField, coords: Iterable):
        cs = tuple(c if isinstance(c, Fraction) else Fraction(c) for c in coords)
        if len(cs) != field.degree:
            raise ValueError(f"expected {field.degree} coordinates, got {len(cs)}")
        self.field = field
        self.coords = cs

    def _check(self, other: "FieldElement") -> None:
        if other.field is not self.field:
            raise ValueError("elements belong to different fields")

    def _lift(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.from_int(other)
        raise TypeError(f"cannot combine FieldElement with {type(other).__name__}")

    def as_poly(self) -> RatPolynomial:
        return RatPolynomial(self.coords)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.field.from_int(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return other.field is self.field and self.coords == other.coords

    def __hash__(self) -> int:
        return hash((id(self.field), self.coords))

    def __repr__(self) -> str:
        return f"FieldElement({format_element(self)})"

    def __str__(self) -> str:
        return format_element(self)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __add__(self, other) -> "FieldElement":
        other = self._lift(other)
        return FieldElement(self.field, (a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.field, (-a for a in self.coords))

    def __sub__(self, other) -> "FieldElement":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "FieldElement":
        return self._lift(other) - self

    def __mul__(self, other) -> "FieldElement":
        other = self._lift(other)
        return self.field.from_poly(self.as_poly() * other.as_poly())

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a number field")
        g, s, _ = self.as_poly().xgcd(self.field.min_poly)
        if g.degree != 0:
            raise FieldDataError("defining polynomial is reducible")
        return self.field.from_poly(s)

    def __truediv__(self, other) -> "FieldElement":
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other) -> "FieldElement":
        return self._lift(other) * self.inverse()

    def __pow__(self, n: int) -> "FieldElement":
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- linear-algebra invariants -------------------------------------------

    def mult_matrix(self) -> list[list[Fraction]]:
        """Matrix of x -> self*x on the power basis (column j = self * a^j)."""
        cols = []
        cur = self
        for _ in range(self.field.degree):
            cols.append(list(cur.coords))
            cur = cur * self.field.gen
        return linalg.transpose(cols)

    def norm(self) -> Fraction:
        return linalg.det(self.mult_matrix())

    def trace(self) -> Fraction:
        m = self.mult_matrix()
        return sum((m[i][i] for i in range(len(m))), Fraction(0))

    def charpoly(self) -> RatPolynomial:
        return RatPolynomial(linalg.charpoly_coeffs(self.mult_matrix()))

    def minimal_polynomial(self) -> RatPolynomial:
        return minimal_polynomial(self)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def denominator(self) -> int:
        return reduce(lcm, (c.denominator for c in self.coords), 1)


def element_arith(a: FieldElement, b: FieldElement | None, op: str) -> FieldElement:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inverse()
    raise ValueError(f"unknown operation {op!r}")


def mult_matrix(a: FieldElement) -> list[list[Fraction]]:
    return a.mult_matrix()


def minimal_polynomial(a: FieldElement) -> RatPolynomial:
    """Monic minimal polynomial over Q.

    The characteristic polynomial of multiplication by ``a`` is a power of the
    minimal polynomial, so the minimal polynomial is its squarefree part.
    """
    cp = a.charpoly()
    mp = cp.squarefree_part()
    e, rem = divmod(cp.degree, mp.degree)
    if rem or mp ** e != cp:
        raise FieldDataError("characteristic polynomial is not a power of an irreducible")
    return mp


def is_algebraic_integer(a: FieldElement) -> bool:
    return all(c.denominator == 1 for c in a.charpoly().coeffs)


def span_dimension(elems: Sequence[FieldElement]) -> int:
    return linalg.rank([list(e.coords) for e in elems]) if elems else 0


def generated_subalgebra(gens: Sequence[FieldElement], field: NumberField) -> list[FieldElement]:
    """Q-basis (echelonized) of the subfield Q(gens) of ``field``."""
    basis = [field.one]
    frontier = list(basis)
    while frontier:
        new = []
        for b in frontier:
            for g in gens:
                p = b * g
                if span_dimension(basis + [p]) > len(basis):
                    basis.append(p)
                    new.append(p)
        frontier = new
    red, piv = linalg.rref([list(b.coords) for b in basis])
    return [FieldElement(field, row) for row in red[: len(piv)]]


def in_span(a: FieldElement, basis: Sequence[FieldElement]) -> bool:
    return span_dimension(list(basis) + [a]) == span_dimension(basis)


def format_element(a: FieldElement, var: str = "a") -> str:
    parts = []
    for i, c in enumerate(a.coords):
        if c == 0:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        coef = str(c)
        if mono:
            term = mono if c == 1 else ("-" + mono if c == -1 else f"{coef}*{mono}")
        else:
            term = coef
        parts.append(term)
    if not parts:
        return "0"
    out = parts[0]
    for t in parts[1:]:
        out += t if t.startswith("-") else "+" + t
    return out


def parse_element(field: NumberField, text: str, var: str = "a") -> FieldElement:
    """Parse a rational-coefficient polynomial in the generator, e.g. ``1+1*a-3/2*a^2``."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty element expression")
    terms: list[str] = []
    cur = ""
    for ch in s:
        if ch in "+-" and cur and cur[-1] not in "*^/":
            terms.append(cur)
            cur = ch
        else:
            cur += ch
    terms.append(cur)
    poly = RatPolynomial()
    for t in terms:
        sign = 1
        if t[0] in "+-":
            sign = -1 if t[0] == "-" else 1
            t = t[1:]
        if not t:
            raise ValueError(f"malformed term in {text!r}")
        if var in t:
            coef_s, _, mono = t.partition(var)
            if coef_s.endswith("*"):
                coef_s = coef_s[:-1]
            coef = Fraction(coef_s) if coef_s else Fraction(1)
            if mono == "":
                power = 1
            elif mono.startswith("^"):
                power = int(mono[1:])
            else:
                raise ValueError(f"malformed monomial {t!r}")
        else:
            coef, power = Fraction(t), 0
        if power < 0:
            raise ValueError("negative exponent in element expression")
        poly = poly + RatPolynomial([0] * power + [sign * coef])
    return field.from_poly(poly)
