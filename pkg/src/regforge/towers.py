"""Subfield posets, the tower functions lambda and aleph, k*, rho(k), and
tower degrees of unit generators."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .balls import (
    FAILS,
    HOLDS,
    NOT_MET,
    RealBall,
    Verdict,
    combine,
    compare_le,
    equality_tolerance,
    log,
    working_precision,
)
from .field import FieldDataError, FieldElement, NumberField, generated_subalgebra, in_span, span_dimension
from .heights import ProductBasis, arakelov_height, product_basis, weil_height

Q_LABEL = "Q"


@dataclass
class SubfieldNode:
    label: str
    degree: int
    abs_discriminant: int
    unit_rank: int
    basis: list[FieldElement]  # Q-basis of the image inside the top field
    field: NumberField | None = None
    embedding: FieldElement | None = None  # image of the node's generator


class SubfieldPoset:
    """All intermediate fields of a top field, with inclusions decided exactly."""

    def __init__(self, top: NumberField, nodes: Sequence[SubfieldNode], top_label: str | None = None):
        self.top = top
        self.top_label = top_label or top.label
        self.nodes = {n.label: n for n in nodes}
        if len(self.nodes) != len(nodes):
            raise FieldDataError("duplicate subfield labels")
        self._validate()

    @classmethod
    def from_subfields(cls, top: NumberField, subfields: Sequence[tuple[str, NumberField, FieldElement]],
                       top_label: str | None = None) -> "SubfieldPoset":
        """Build from (label, field, image of its generator in ``top``); Q and
        the top field are added when missing."""
        d = top.degree
        top_label = top_label or top.label
        nodes = []
        labels = {s[0] for s in subfields}
        if Q_LABEL not in labels and top_label != Q_LABEL:
            nodes.append(SubfieldNode(Q_LABEL, 1, 1, 0, [top.one]))
        for label, k, emb in subfields:
            if emb.field is not top:
                raise FieldDataError(f"subfield {label}: embedding is not an element of the top field")
            acc = top.zero
            for c in reversed(k.min_poly.coeffs):
                acc = acc * emb + c
            if not acc.is_zero():
                raise FieldDataError(f"subfield {label}: embedding is not a root of its polynomial")
            basis = generated_subalgebra([emb], top)
            if len(basis) != k.degree:
                raise FieldDataError(f"subfield {label}: embedding generates degree {len(basis)}, not {k.degree}")
            nodes.append(SubfieldNode(label, k.degree, k.abs_discriminant, k.unit_rank, basis, k, emb))
        if top_label not in labels:
            basis = [top.element([int(i == j) for j in range(d)]) for i in range(d)]
            nodes.append(SubfieldNode(top_label, d, top.abs_discriminant, top.unit_rank, basis, top, top.gen))
        return cls(top, nodes, top_label)

    def _validate(self) -> None:
        if Q_LABEL not in self.nodes or self.top_label not in self.nodes:
            raise FieldDataError("poset must contain Q and the top field")
        spans = {}
        for n in self.nodes.values():
            if span_dimension(n.basis) != n.degree:
                raise FieldDataError(f"{n.label}: basis does not have dimension {n.degree}")
            key = tuple(sorted(tuple(b.coords) for b in n.basis))
            if key in spans:
                raise FieldDataError(f"{n.label} and {spans[key]} are the same subfield")
            spans[key] = n.label
        dk = self.nodes[self.top_label].abs_discriminant
        d = self.top.degree
        for n in self.nodes.values():
            if d % n.degree:
                raise FieldDataError(f"{n.label}: degree does not divide {d}")
            if dk % n.abs_discriminant ** (d // n.degree):
                raise FieldDataError(f"{n.label}: D^[k:k'] does not divide D_k")
        for a, b in self.strict_inclusions:
            if self.nodes[b].degree % self.nodes[a].degree:
                raise FieldDataError(f"{a} in {b} but degrees do not divide")

    def __contains__(self, label: str) -> bool:
        return label in self.nodes

    def __getitem__(self, label: str) -> SubfieldNode:
        if label not in self.nodes:
            raise KeyError(f"no subfield {label!r} in poset of {self.top_label}")
        return self.nodes[label]

    def contains(self, small: str, big: str) -> bool:
        a, b = self[small], self[big]
        if a.degree > b.degree or b.degree % a.degree:
            return False
        return all(in_span(x, b.basis) for x in a.basis)

    @cached_property
    def strict_inclusions(self) -> list[tuple[str, str]]:
        labels = sorted(self.nodes)
        return [(a, b) for a in labels for b in labels if a != b and self.contains(a, b)]

    def relative_degree(self, small: str, big: str | None = None) -> int:
        big = big or self.top_label
        return self[big].degree // self[small].degree

    def node_of_span(self, basis: Sequence[FieldElement]) -> str:
        dim = span_dimension(basis)
        for n in self.nodes.values():
            if n.degree == dim and all(in_span(x, n.basis) for x in basis):
                return n.label
        raise FieldDataError("subfield missing from the poset")

    def chains(self) -> list[list[str]]:
        """All maximal chains Q = k_0 < ... < k_N = top along covering relations."""
        covers = {a: [] for a in self.nodes}
        inc = set(self.strict_inclusions)
        for a, b in inc:
            if not any((a, c) in inc and (c, b) in inc for c in self.nodes):
                covers[a].append(b)
        out = []

        def walk(path):
            last = path[-1]
            if last == self.top_label:
                out.append(path)
                return
            for nxt in sorted(covers[last]):
                walk(path + [nxt])

        walk([Q_LABEL])
        return out


# -- lambda and aleph ------------------------------------------------------------------


def lambda_(poset: SubfieldPoset, label: str) -> int:
    """Length of the longest tower Q = k_0 < k_1 < ... < k_m = label."""
    poset[label]
    memo: dict[str, int] = {}

    def lam(x: str) -> int:
        if x == Q_LABEL:
            return 0
        if x not in memo:
            below = [a for a, b in poset.strict_inclusions if b == x]
            memo[x] = 1 + max(lam(a) for a in below)
        return memo[x]

    return lam(label)


@dataclass(frozen=True)
class Aleph:
    base: int  # 2 [k : k']
    exponent: int  # lambda(k') - lambda(k), <= 0

    @property
    def value(self) -> Fraction:
        return Fraction(self.base) ** self.exponent

    def ball(self, precision: int = 128) -> RealBall:
        with working_precision(precision):
            return RealBall(self.value)


def aleph(poset: SubfieldPoset, label: str) -> Aleph:
    return Aleph(2 * poset.relative_degree(label), lambda_(poset, label) - lambda_(poset, poset.top_label))


def check_aleph_monotone(poset: SubfieldPoset) -> Verdict:
    """aleph strictly increases along every inclusion, aleph(Q) > 0, aleph(top) = 1."""
    bad = [(a, b) for a, b in poset.strict_inclusions if not aleph(poset, a).value < aleph(poset, b).value]
    ok_ends = aleph(poset, poset.top_label).value == 1 and aleph(poset, Q_LABEL).value > 0
    lam_bad = [(a, b) for a, b in poset.strict_inclusions if not lambda_(poset, a) < lambda_(poset, b)]
    lam_cap = 2 ** lambda_(poset, poset.top_label) <= poset.top.degree
    state = HOLDS if not bad and ok_ends and not lam_bad and lam_cap else FAILS
    return Verdict(state, note="aleph monotone on chains",
                   details={"violations": bad, "lambda_violations": lam_bad, "chains": len(poset.chains()),
                            "lambda_top": lambda_(poset, poset.top_label), "log2_degree": math.log2(poset.top.degree)})


def aleph_gap_check(poset: SubfieldPoset, sub: str, alpha: FieldElement) -> Verdict:
    """aleph(k'(a)) - aleph(k')[k:k'] >= 2^(l(k')-l(k)) [k:k']^(l(k')-l(k)+1), exactly."""
    node = poset[sub]
    if alpha.field is not poset.top:
        raise ValueError("alpha must lie in the top field")
    if in_span(alpha, node.basis):
        raise ValueError(f"alpha lies in {sub}: the lemma needs alpha outside k'")
    ext_basis = generated_subalgebra(node.basis + [alpha], poset.top)
    bigger = poset.node_of_span(ext_basis)
    m = poset.relative_degree(sub)
    e = lambda_(poset, sub) - lambda_(poset, poset.top_label)
    lhs = aleph(poset, bigger).value - aleph(poset, sub).value * m
    rhs = Fraction(2) ** e * Fraction(m) ** (e + 1)
    state = HOLDS if lhs >= rhs else FAILS
    return Verdict(state, RealBall(lhs), RealBall(rhs), tight=lhs == rhs, note="aleph gap",
                   details={"k_prime": sub, "k_prime_alpha": bigger, "lhs": lhs, "rhs": rhs})


# -- k* ----------------------------------------------------------------------------------


def disc_below_power(d_sub: int, d_top: int, a: Fraction, precision: int = 128) -> bool:
    """D' < D^a, by log balls and, when they overlap, exact cross powers."""
    with working_precision(precision):
        lhs = log(RealBall(d_sub))
        rhs = log(RealBall(d_top)) * a
    if lhs.certainly_lt(rhs):
        return True
    if rhs.certainly_lt(lhs):
        return False
    # D'^q < D^p with a = p/q
    return d_sub ** a.denominator < d_top ** a.numerator


def star_candidates(poset: SubfieldPoset) -> list[str]:
    dk = poset[poset.top_label].abs_discriminant
    return sorted(l for l, n in poset.nodes.items()
                  if l != poset.top_label and disc_below_power(n.abs_discriminant, dk, aleph(poset, l).value))


def maximal_star_field(poset: SubfieldPoset) -> str:
    """A proper subfield k* with D_{k*} < D_k^aleph(k*) and no strictly larger
    proper subfield with the same property.  Ties are broken by larger
    degree, then label."""
    cands = set(star_candidates(poset))
    if Q_LABEL not in cands:
        raise ArithmeticError("D_Q < D_k^aleph(Q) should always hold")
    maximal = [c for c in cands if not any((c, o) in set(poset.strict_inclusions) for o in cands)]
    maximal.sort(key=lambda c: (-poset[c].degree, c))
    return maximal[0]


def verify_star_field(poset: SubfieldPoset, label: str) -> Verdict:
    """Re-check both clauses of the definition of k* for ``label``."""
    dk = poset[poset.top_label].abs_discriminant
    node = poset[label]
    below = label != poset.top_label and disc_below_power(node.abs_discriminant, dk, aleph(poset, label).value)
    above = [b for a, b in poset.strict_inclusions if a == label]
    bad = [b for b in above if b != poset.top_label
           and disc_below_power(poset[b].abs_discriminant, dk, aleph(poset, b).value)]
    rho, _ = rho_and_cm(poset)
    rank_ok = node.unit_rank <= rho
    state = HOLDS if below and not bad and rank_ok else FAILS
    return Verdict(state, note="k* definition", details={"strict_below": below, "larger_violations": bad,
                                                        "rank_le_rho": rank_ok})


def rho_and_cm(poset: SubfieldPoset) -> tuple[int, bool]:
    """rho(k) = max unit rank over proper subfields, and whether rho = r(k)."""
    rho = max((n.unit_rank for l, n in poset.nodes.items() if l != poset.top_label), default=0)
    return rho, rho == poset[poset.top_label].unit_rank


# -- tower degrees -------------------------------------------------------------------------


@dataclass
class TowerData:
    degrees: list[int]
    q: int | None  # first j with Q(a_1..a_j) = k
    generates: bool
    beta: ProductBasis | None
    discriminant_bound: Verdict
    heights: list[RealBall] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        parts = [self.discriminant_bound]
        if self.beta is not None:
            parts.append(Verdict(self.beta.verdict))
        return combine(parts)


def tower_degrees(k: NumberField, units: Sequence[FieldElement], precision: int = 128) -> TowerData:
    """N_j = [Q(a_1..a_j) : Q(a_1..a_{j-1})] by span growth, the product basis
    beta built from the monomials a^n (0 <= n_j < N_j), and the chain
    log D_k <= 2d log H(beta) <= d log d + 2d sum (N_j - 1) h(a_j)."""
    units = list(units)
    d = k.degree
    hs = [weil_height(u, precision) for u in units]
    for a, b in zip(hs, hs[1:]):
        if b.certainly_lt(a):
            raise ValueError("units must be sorted by ascending height")
    degrees = []
    prev = 1
    q = None
    for j in range(len(units)):
        dim = len(generated_subalgebra(units[: j + 1], k))
        degrees.append(dim // prev)
        prev = dim
        if q is None and dim == d:
            q = j + 1
    generates = prev == d
    if sum(n - 1 for n in degrees) > d - 1:
        raise ArithmeticError("sum (N_j - 1) exceeds d - 1")
    with working_precision(precision):
        logd = log(RealBall(k.abs_discriminant))
        rhs = log(RealBall(d)) * d + sum((h * (2 * d * (n - 1)) for h, n in zip(hs, degrees)), RealBall(0))
    if not generates:
        v = Verdict(NOT_MET, logd, rhs, precision, note="units do not generate k")
        return TowerData(degrees, q, False, None, v, hs)
    beta = product_basis(units, degrees, precision)
    with working_precision(precision):
        mid = arakelov_height(beta.vector, precision) * (2 * d)
        tol = equality_tolerance(precision)
        first = compare_le(logd, mid, precision, tol)
        second = compare_le(mid, rhs, precision, tol)
    state = combine([first, second])
    v = Verdict(state, logd, rhs, precision, first.tight or second.tight, "tower discriminant bound",
                {"two_d_log_h_beta": mid, "first": first.state, "second": second.state})
    return TowerData(degrees, q, True, beta, v, hs)


__all__ = [
    "Q_LABEL",
    "SubfieldNode",
    "SubfieldPoset",
    "Aleph",
    "TowerData",
    "lambda_",
    "aleph",
    "check_aleph_monotone",
    "aleph_gap_check",
    "disc_below_power",
    "star_candidates",
    "maximal_star_field",
    "verify_star_field",
    "rho_and_cm",
    "tower_degrees",
]
