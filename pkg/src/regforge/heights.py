"""Weil and Arakelov heights, the discriminant invariant F_k, and related checks.

The finite part of an Arakelov height is never computed prime by prime: after
clearing denominators the content ideal J(v) is an integral ideal whose norm
is the index of the Z-span of {v_i * w_j} in the ring of integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import lcm
from typing import Sequence

from . import linalg
from .balls import (
    FAILS,
    HOLDS,
    RealBall,
    Verdict,
    ball_sum,
    combine,
    compare_eq,
    compare_le,
    equality_tolerance,
    exp,
    log,
    log_plus,
    working_precision,
)
from .embeddings import certified_roots, evaluate, places
from .field import FieldElement, minimal_polynomial, span_dimension
from .hnf import IntegerMatrix, hnf_with_index

DEFAULT_BITS = 128


def _as_vector(v) -> list[FieldElement]:
    v = list(v)
    if not v:
        raise ValueError("empty vector")
    field = v[0].field
    if any(x.field is not field for x in v):
        raise ValueError("vector entries live in different fields")
    return v


# -- Weil height ------------------------------------------------------------------


def mahler_log(p_int: Sequence[int], precision: int = DEFAULT_BITS) -> RealBall:
    """log M(p) for an integer polynomial without repeated roots."""
    from .poly import RatPolynomial

    roots = certified_roots(RatPolynomial(p_int), precision)
    with working_precision(precision):
        acc = log(RealBall(abs(p_int[-1])))
        for z in roots:
            acc = acc + log_plus(abs(z) if not z.is_real() else abs(z.re))
        return acc


def weil_height(a: FieldElement, precision: int = DEFAULT_BITS) -> RealBall:
    """Absolute logarithmic Weil height via the Mahler measure of the minimal polynomial."""
    if a.is_zero():
        raise ValueError("height of zero")
    if a.is_rational():
        q = a.coords[0]
        with working_precision(precision):
            return log(RealBall(max(abs(q.numerator), q.denominator)))
    mp_ = minimal_polynomial(a)
    p_int = mp_.primitive_integer()
    with working_precision(precision):
        return mahler_log(p_int, precision) / (len(p_int) - 1)


# -- Arakelov height --------------------------------------------------------------


def content_norm(v: Sequence[FieldElement]) -> Fraction:
    """N(J(v)) for the fractional ideal generated by the entries of v."""
    v = [x for x in v if not x.is_zero()]
    field = v[0].field
    d = field.degree
    coords = [field.integral_coords(x) for x in v]
    c = lcm(*(q.denominator for row in coords for q in row))
    gens = []
    for x in v:
        for w in field.integral_basis:
            gens.append([int(q * c) for q in field.integral_coords(x * w)])
    _, idx = hnf_with_index(IntegerMatrix.from_columns(gens))
    return Fraction(idx, c ** d)


def archimedean_log_sum(v: Sequence[FieldElement], precision: int = DEFAULT_BITS) -> RealBall:
    """sum over w | inf of d_w * log ||v||_w with the l2 norm at each place."""
    field = v[0].field
    pl = places(field, precision)
    terms = []
    for p in pl:
        with working_precision(precision):
            sq = RealBall(0)
            for x in v:
                if x.is_zero():
                    continue
                val = evaluate(x, p, precision)
                sq = sq + (val.re * val.re if p.is_real else val.abs_sq())
            terms.append(log(sq) * p.local_degree / 2)
    with working_precision(precision):
        return ball_sum(terms)


def arakelov_height(v: Sequence[FieldElement], precision: int = DEFAULT_BITS) -> RealBall:
    """log H(v) for a nonzero vector with entries in a common field."""
    v = _as_vector(v)
    if all(x.is_zero() for x in v):
        raise ValueError("Arakelov height of the zero vector")
    d = v[0].field.degree
    arch = archimedean_log_sum(v, precision)
    nj = content_norm(v)
    with working_precision(precision):
        return (arch - log(RealBall(nj))) / d


# -- F_k and the discriminant identity ----------------------------------------------


@dataclass(frozen=True)
class FkData:
    value: Fraction
    trace_det: Fraction
    norm_j: Fraction
    degenerate: bool


def f_k_data(v: Sequence[FieldElement]) -> FkData:
    v = _as_vector(v)
    field = v[0].field
    if len(v) != field.degree:
        raise ValueError(f"F_k needs exactly {field.degree} entries, got {len(v)}")
    tdet = field.trace_form_det(v)
    if tdet == 0:
        return FkData(Fraction(0), tdet, Fraction(0), True)
    nj = content_norm(v)
    return FkData(abs(tdet) / nj ** 2, tdet, nj, False)


def f_k(v: Sequence[FieldElement]) -> Fraction:
    """|det Tr(b_i b_j)| * prod_{finite v} ||b||_v^{2 d_v}; 0 for dependent entries."""
    return f_k_data(v).value


def _scaled_integral_columns(v: Sequence[FieldElement]) -> tuple[list[list[int]], int]:
    field = v[0].field
    coords = [field.integral_coords(x) for x in v]
    c = lcm(*(q.denominator for row in coords for q in row))
    return [[int(q * c) for q in row] for row in coords], c


def module_index(v: Sequence[FieldElement]) -> dict:
    """[J(v) : M(v)] by two routes.

    ``via_change_of_basis``: write the entries on a Z-basis of J(v) and take
    |det| of the integer transition matrix.  ``via_ratio``: [O_k : M] / [O_k : J].
    Both are computed after scaling v by a common denominator, which leaves
    the index unchanged.
    """
    v = _as_vector(v)
    field = v[0].field
    cols, c = _scaled_integral_columns(v)
    gens = []
    for x in v:
        for w in field.integral_basis:
            gens.append([int(q * c) for q in field.integral_coords(x * w)])
    hnf, idx_j = hnf_with_index(IntegerMatrix.from_columns(gens))
    gamma = hnf.rows()
    b = linalg.transpose(cols)  # columns are the scaled entries
    a = linalg.matmul(linalg.inverse(gamma), b)
    if any(q.denominator != 1 for row in a for q in row):
        raise ArithmeticError("entries do not lie in their own content ideal")
    route_a = abs(linalg.det(a))
    _, idx_m = hnf_with_index(IntegerMatrix.from_columns(cols))
    route_b = Fraction(idx_m, idx_j)
    return {"via_change_of_basis": int(route_a), "via_ratio": route_b, "norm_j": Fraction(idx_j, c ** field.degree)}


def discriminant_identity_check(v: Sequence[FieldElement], precision: int = DEFAULT_BITS) -> Verdict:
    """F_k(v) = [J:M]^2 D_k exactly, and F_k(v) <= H(v)^{2d} as balls."""
    v = _as_vector(v)
    field = v[0].field
    data = f_k_data(v)
    if data.degenerate:
        raise ValueError("entries are linearly dependent over Q")
    idx = module_index(v)
    d = field.degree
    routes_agree = idx["via_ratio"] == idx["via_change_of_basis"]
    rhs_exact = Fraction(idx["via_change_of_basis"]) ** 2 * field.abs_discriminant
    identity_ok = routes_agree and data.value == rhs_exact
    logh = arakelov_height(v, precision)
    with working_precision(precision):
        bound = exp(logh * (2 * d))
        ineq = compare_le(RealBall(data.value), bound, precision, equality_tolerance(precision))
    details = {
        "f_k": data.value,
        "index": idx["via_change_of_basis"],
        "index_ratio": idx["via_ratio"],
        "identity_rhs": rhs_exact,
        "identity": identity_ok,
        "hadamard": ineq.state,
    }
    state = ineq.state if identity_ok else FAILS
    return Verdict(state, ineq.lhs, ineq.rhs, precision, ineq.tight, "discriminant identity", details)


# -- Special height inequalities ----------------------------------------------------


def power_vector(a: FieldElement, m: int) -> list[FieldElement]:
    out = [a.field.one]
    for _ in range(m - 1):
        out.append(out[-1] * a)
    return out


def power_height_bound_check(a: FieldElement, m: int, precision: int = DEFAULT_BITS) -> Verdict:
    """log H(1, a, ..., a^{m-1}) <= (1/2) log m + (m - 1) h(a)."""
    if a.is_zero():
        raise ValueError("a must be nonzero")
    if m < 1:
        raise ValueError("m must be a positive integer")
    lhs = arakelov_height(power_vector(a, m), precision)
    h = weil_height(a, precision)
    with working_precision(precision):
        rhs = log(RealBall(m)) / 2 + h * (m - 1)
        return compare_le(lhs, rhs, precision, equality_tolerance(precision))


@dataclass
class ProductBasis:
    vector: list[FieldElement]
    factors: list[list[FieldElement]]
    degrees: tuple[int, ...]
    factorization: Verdict
    bound: Verdict

    @property
    def verdict(self) -> str:
        return combine([self.factorization, self.bound])


def product_basis(gens: Sequence[FieldElement], degrees: Sequence[int],
                  precision: int = DEFAULT_BITS) -> ProductBasis:
    """Monomials a_1^{n_1}...a_M^{n_M} (0 <= n_m < N_m), n_1 varying fastest.

    Also certifies H(beta) = prod H(a_m) and
    log H(beta) <= (1/2) log prod N_m + sum (N_m - 1) h(a_m).
    """
    gens = list(gens)
    degrees = tuple(int(n) for n in degrees)
    if len(gens) != len(degrees) or not gens:
        raise ValueError("need one degree per generator")
    powers = [power_vector(g, n) for g, n in zip(gens, degrees)]
    vec = []
    for idx in product(*(range(n) for n in reversed(degrees))):
        idx = idx[::-1]
        term = gens[0].field.one
        for m, e in enumerate(idx):
            term = term * powers[m][e]
        vec.append(term)
    total = 1
    for n in degrees:
        total *= n
    if span_dimension(vec) != total:
        raise ValueError("monomial set is linearly dependent: degrees inconsistent with generators")
    logh = arakelov_height(vec, precision)
    factor_logs = [arakelov_height(p, precision) for p in powers]
    hs = [weil_height(g, precision) for g in gens]
    with working_precision(precision):
        prod_log = ball_sum(factor_logs)
        fact = compare_eq(logh, prod_log, equality_tolerance(precision), precision, "height factorization")
        rhs = log(RealBall(total)) / 2 + ball_sum(h * (n - 1) for h, n in zip(hs, degrees))
        bnd = compare_le(logh, rhs, precision, equality_tolerance(precision), "product-basis bound")
    return ProductBasis(vec, powers, degrees, fact, bnd)


def dhm_check(a: FieldElement, subfield_discriminant: int | None = None,
              precision: int = DEFAULT_BITS) -> Verdict:
    """h(a) >= log(D / m^m) / (2m(m-1)) with m = [Q(a):Q] and D = D_{Q(a)}.

    When Q(a) is the whole ambient field its discriminant is taken from the
    field; otherwise the caller must supply D_{Q(a)}.
    """
    if a.is_zero():
        raise ValueError("a must be nonzero")
    m = minimal_polynomial(a).degree
    if m < 2:
        raise ValueError("need [Q(a):Q] >= 2")
    if subfield_discriminant is None:
        if m != a.field.degree:
            raise ValueError("discriminant of Q(a) required: Q(a) is a proper subfield")
        subfield_discriminant = a.field.abs_discriminant
    disc = abs(int(subfield_discriminant))
    h = weil_height(a, precision)
    if disc <= m ** m:
        return Verdict(HOLDS, RealBall(0), h, precision, note="vacuous: D <= m^m",
                       details={"vacuous": True})
    with working_precision(precision):
        rhs = log(RealBall(Fraction(disc, m ** m))) / (2 * m * (m - 1))
        v = compare_le(rhs, h, precision)
    v.note = "discriminant height bound"
    v.details["vacuous"] = False
    return v
