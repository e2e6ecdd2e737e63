"""Relative norms, relative units, place partitions and relative regulators.

For an extension l/k the generator theta of l also generates l over k, so
{theta^i : i < [l:k]} is a k-basis of l; relative norms are determinants
over k in that basis.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Sequence

import numpy as np

from . import linalg
from .balls import (
    FAILS,
    HOLDS,
    UNDECIDED,
    RealBall,
    Verdict,
    ball_det,
    ball_prod,
    ball_sum,
    combine,
    compare_eq,
    compare_le,
    equality_tolerance,
    precision_cap,
    working_precision,
)
from .embeddings import certified_roots, evaluate, log_vector, places
from .field import FieldDataError, FieldElement, NumberField
from .heights import weil_height
from .hnf import hnf_with_index, integer_kernel, integer_rank
from .minima import LogLattice, MinimaResult, successive_minima
from .norms import NABLA, NormTag, nabla
from .units import UnitSystem, regulator

logger = logging.getLogger(__name__)

TOL_BITS = 40


class PreconditionError(ValueError):
    pass


class FiberMatchError(ArithmeticError):
    """A place of l could not be assigned to a unique place of k."""


# -- extensions ---------------------------------------------------------------------


class Extension:
    """l / k given by the image in l of k's generator."""

    def __init__(self, base: NumberField, top: NumberField, embedding: FieldElement, label: str = ""):
        if embedding.field is not top:
            raise FieldDataError("embedding must be an element of the top field")
        if top.degree % base.degree:
            raise FieldDataError(f"[l:Q] = {top.degree} is not a multiple of [k:Q] = {base.degree}")
        self.base = base
        self.top = top
        self.embedding = embedding
        self.label = label or f"{top.label}/{base.label}"
        self.relative_degree = top.degree // base.degree
        if not self.embed_poly_vanishes():
            raise FieldDataError("embedding does not satisfy the base field's defining polynomial")
        self._powers = [top.one]
        for _ in range(base.degree - 1):
            self._powers.append(self._powers[-1] * embedding)
        self._qbasis_inv = self._qbasis_inverse()

    def __repr__(self) -> str:
        return f"Extension({self.label!r}, [l:k]={self.relative_degree})"

    def embed_poly_vanishes(self) -> bool:
        acc = self.top.zero
        for c in reversed(self.base.min_poly.coeffs):
            acc = acc * self.embedding + c
        return acc.is_zero()

    def embed(self, x: FieldElement) -> FieldElement:
        """Image in l of an element of k."""
        if x.field is not self.base:
            raise ValueError("element is not in the base field")
        acc = self.top.zero
        for c, p in zip(x.coords, self._powers):
            if c:
                acc = acc + p * c
        return acc

    def _qbasis_inverse(self):
        m, dk = self.relative_degree, self.base.degree
        theta = self.top.gen
        cols = []
        tp = self.top.one
        for _ in range(m):
            for s in range(dk):
                cols.append((self._powers[s] * tp).coords)
            tp = tp * theta
        try:
            return linalg.inverse(linalg.transpose(cols))
        except ZeroDivisionError:
            raise FieldDataError("top generator does not generate l over k") from None

    def k_coordinates(self, y: FieldElement) -> list[FieldElement]:
        """c_0..c_{m-1} in k with y = sum c_i theta^i."""
        q = linalg.matvec(self._qbasis_inv, y.coords)
        dk = self.base.degree
        return [self.base.element(q[i * dk:(i + 1) * dk]) for i in range(self.relative_degree)]

    def contains(self, y: FieldElement) -> bool:
        """True when y lies in the image of k."""
        cs = self.k_coordinates(y)
        return all(c.is_zero() for c in cs[1:])

    def preimage(self, y: FieldElement) -> FieldElement:
        cs = self.k_coordinates(y)
        if any(not c.is_zero() for c in cs[1:]):
            raise ValueError("element is not in the base field")
        return cs[0]


def _det_over_field(rows: list[list[FieldElement]], one: FieldElement) -> FieldElement:
    a = [list(r) for r in rows]
    n = len(a)
    result = one
    for col in range(n):
        piv = next((r for r in range(col, n) if not a[r][col].is_zero()), None)
        if piv is None:
            return one * 0
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            result = -result
        p = a[col][col]
        result = result * p
        pinv = p.inverse()
        for r in range(col + 1, n):
            if a[r][col].is_zero():
                continue
            f = a[r][col] * pinv
            a[r] = [a[r][c] - f * a[col][c] for c in range(n)]
    return result


def relative_norm(a: FieldElement, ext: Extension) -> FieldElement:
    """N_{l/k}(a): determinant over k of multiplication by a."""
    if a.field is not ext.top:
        raise ValueError("element is not in the top field")
    if a.is_zero():
        raise ValueError("relative norm of zero")
    m = ext.relative_degree
    theta = ext.top.gen
    cols = []
    tp = ext.top.one
    for _ in range(m):
        cols.append(ext.k_coordinates(a * tp))
        tp = tp * theta
    rows = [[cols[j][i] for j in range(m)] for i in range(m)]
    return _det_over_field(rows, ext.base.one)


# -- places -------------------------------------------------------------------------


@dataclass(frozen=True)
class PlacePartition:
    fibers: tuple[tuple[int, ...], ...]  # places of l above each place of k
    dropped: tuple[int, ...]  # one place of l per place of k
    S: tuple[int, ...]
    blocks: tuple[tuple[int, ...], ...]  # positions in S, one block per place of k
    local_degrees: tuple[int, ...]  # d_w for every place of l
    rule: str = "smallest"

    @property
    def size(self) -> int:
        return len(self.S)

    def nonempty_blocks(self) -> tuple[tuple[int, ...], ...]:
        return tuple(b for b in self.blocks if b)


def fiber_map(ext: Extension, precision: int = 128) -> list[int]:
    """For each place w of l, the index of the place of k below it."""
    bits = precision
    cap = max(precision_cap(), precision)
    k = ext.base
    while True:
        roots = certified_roots(k.min_poly, bits)
        r1 = k.signature[0] if k.signature else sum(1 for z in roots if z.is_real())
        r2 = (k.degree - r1) // 2
        # root index -> place index (conjugate pairs share a place)
        owner = list(range(r1)) + [r1 + j for j in range(r2)] + [r1 + j for j in range(r2)]
        lp = places(ext.top, bits)
        out = []
        ok = True
        with working_precision(bits):
            for w in lp:
                val = evaluate(ext.embedding, w, bits)
                hits = {owner[i] for i, z in enumerate(roots) if z.overlaps(val)}
                if len(hits) != 1:
                    ok = False
                    break
                out.append(hits.pop())
        if ok:
            return out
        if bits >= cap:
            raise FiberMatchError("fiber matching is ambiguous at the precision cap")
        bits = min(2 * bits, cap)


def place_partition(ext: Extension, drop_rule: str = "smallest", precision: int = 128) -> PlacePartition:
    """S(l/k): all places of l minus one dropped place above each place of k.

    ``drop_rule`` picks the dropped place in each fiber by the certified
    embedding of l's generator: lexicographically smallest (re, im) midpoint,
    or ``"largest"``.
    """
    if drop_rule not in ("smallest", "largest"):
        raise ValueError("drop_rule must be 'smallest' or 'largest'")
    fmap = fiber_map(ext, precision)
    lp = places(ext.top, precision)
    nk = len(places(ext.base, precision))
    fibers = [[w for w, v in enumerate(fmap) if v == vk] for vk in range(nk)]
    if any(not f for f in fibers):
        raise FiberMatchError("a place of k has an empty fiber")

    def key(w):
        z = lp.places[w].root
        return (z.re.mid, z.im.mid)

    dropped = []
    for f in fibers:
        pick = min(f, key=key) if drop_rule == "smallest" else max(f, key=key)
        dropped.append(pick)
    S = tuple(w for f, dw in zip(fibers, dropped) for w in f if w != dw)
    pos = {w: i for i, w in enumerate(S)}
    blocks = tuple(tuple(pos[w] for w in f if w != dw) for f, dw in zip(fibers, dropped))
    expected = ext.top.unit_rank - ext.base.unit_rank
    if len(S) != expected:
        raise ArithmeticError(f"|S| = {len(S)} but r(l) - r(k) = {expected}")
    return PlacePartition(tuple(tuple(f) for f in fibers), tuple(dropped), S, blocks,
                          lp.local_degrees, drop_rule)


def x_vector(a: FieldElement, part: PlacePartition, precision: int = 128) -> list[RealBall]:
    """x(a) = (d_w log ||a||_w) for w in S."""
    lv = log_vector(a, precision)
    return [lv[w] for w in part.S]


def fiber_sums(a: FieldElement, part: PlacePartition, precision: int = 128) -> list[RealBall]:
    """sum_{w | v} d_w log ||a||_w for each place v of k."""
    lv = log_vector(a, precision)
    with working_precision(precision):
        return [ball_sum(lv[w] for w in f) for f in part.fibers]


# -- relative units -------------------------------------------------------------------


def _express_in_units(x: FieldElement, us: UnitSystem, precision: int = 128) -> list[int]:
    """Integer exponents a with x = zeta * prod u_j^{a_j}, zeta^t = 1 checked exactly."""
    r = us.rank
    k = us.field
    if r == 0:
        coeffs = []
    else:
        bits = precision
        mat = [[float(b.mid) for b in row] for row in _log_rows(us.units, bits)]
        target = [float(b.mid) for b in log_vector(x, bits)]
        sol, *_ = np.linalg.lstsq(np.array(mat), np.array(target), rcond=None)
        coeffs = [int(round(s)) for s in sol]
    rest = x * us.element([-c for c in coeffs]) if coeffs else x
    if rest ** us.torsion_order != k.one:
        raise FieldDataError("residual is not a root of unity: unit system is not fundamental "
                             "or the element is not a unit")
    return coeffs


def _log_rows(units, bits):
    cols = [log_vector(u, bits) for u in units]
    return [[cols[j][i] for j in range(len(cols))] for i in range(len(cols[0]))]


@dataclass
class RelativeUnitBasis:
    ext: Extension
    exponent_matrix: list[list[int]]  # rows: basis elements as exponents on l's units
    elements: list[FieldElement]
    norm_exponents: list[list[int]]  # row i: N(eta_i) on k's units
    norm_image_index: int  # [F_k : N(F_l)]
    base_in_top: list[list[int]] = field(default_factory=list)  # k's units on l's units

    @property
    def rank(self) -> int:
        return len(self.elements)


def _lll_rows(vectors: list[list[int]]) -> list[list[int]]:
    if not vectors:
        return vectors
    from .minima import lll_columns

    b = np.array(vectors, dtype=float).T
    u = lll_columns(b)
    return [[sum(c * v[i] for c, v in zip(col, vectors)) for i in range(len(vectors[0]))] for col in u]


def relative_unit_kernel(ext: Extension, us_l: UnitSystem, us_k: UnitSystem,
                         precision: int = 128) -> RelativeUnitBasis:
    """Basis of E_{l/k} = ker(N_{l/k} : F_l -> F_k)."""
    if us_l.field is not ext.top or us_k.field is not ext.base:
        raise ValueError("unit systems do not match the extension")
    rl, rk = us_l.rank, us_k.rank
    norm_exps = []
    for eta in us_l.units:
        nm = relative_norm(eta, ext)
        norm_exps.append(_express_in_units(nm, us_k, precision))
    if rk:
        at = [[norm_exps[i][j] for i in range(rl)] for j in range(rk)]
        kernel = integer_kernel(at)
        _, idx = hnf_with_index([list(r) for r in at])
    else:
        kernel = [[int(i == j) for i in range(rl)] for j in range(rl)]
        idx = 1
    kernel = _lll_rows(kernel)
    if len(kernel) != rl - rk:
        raise ArithmeticError(f"kernel rank {len(kernel)} != r(l) - r(k) = {rl - rk}")
    elems = [us_l.element(v) for v in kernel]
    for e in elems:
        if relative_norm(e, ext) ** us_k.torsion_order != ext.base.one:
            raise ArithmeticError("kernel element has non-torsion relative norm")
    base_imgs = [_express_in_units(ext.embed(eps), us_l, precision) for eps in us_k.units]
    # F_k meets E_{l/k} trivially: k's units together with the kernel span rank r(l)
    if integer_rank(kernel + base_imgs) != rl:
        raise ArithmeticError("image of F_k meets the relative units nontrivially")
    return RelativeUnitBasis(ext, kernel, elems, norm_exps, idx, base_imgs)


def is_relative_unit(psi: FieldElement, ext: Extension, torsion_order_k: int) -> bool:
    from .field import is_algebraic_integer

    if psi.is_zero() or not is_algebraic_integer(psi) or abs(psi.norm()) != 1:
        return False
    return relative_norm(psi, ext) ** torsion_order_k == ext.base.one


# -- relative regulator and height identities --------------------------------------------


def relative_log_matrix(elements: Sequence[FieldElement], part: PlacePartition,
                        precision: int = 128) -> list[list[RealBall]]:
    cols = [x_vector(e, part, precision) for e in elements]
    return [[cols[j][i] for j in range(len(cols))] for i in range(part.size)]


def relative_regulator(basis: RelativeUnitBasis | Sequence[FieldElement], part: PlacePartition,
                       precision: int = 128) -> RealBall:
    """|det M_{l/k}| over the rows S(l/k)."""
    elems = basis.elements if isinstance(basis, RelativeUnitBasis) else list(basis)
    if len(elems) != part.size:
        raise PreconditionError(f"basis rank {len(elems)} != |S| = {part.size}")
    if not elems:
        raise PreconditionError("relative unit rank is zero")
    bits = precision
    cap = max(precision_cap(), precision)
    while True:
        with working_precision(bits):
            det = abs(ball_det(relative_log_matrix(elems, part, bits)))
        if det.excludes_zero():
            return det
        if bits >= cap:
            raise ArithmeticError("relative log matrix is singular")
        bits = min(2 * bits, cap)


def nabla_height_identity_check(psi: FieldElement, ext: Extension, part: PlacePartition,
                                torsion_order_k: int = 2, precision: int = 128,
                                strict: bool = True, tol: float | None = None) -> Verdict:
    """nabla(x(psi)) = [l:Q] h(psi) and the zero fiber sums, for a relative unit.

    With ``strict=False`` the comparison is also run for elements that are not
    relative units (negative controls); the precondition is then only reported.
    """
    rel = is_relative_unit(psi, ext, torsion_order_k)
    if strict and not rel:
        raise PreconditionError("element is not a relative unit")
    tol = tol if tol is not None else min(2.0 ** -TOL_BITS, equality_tolerance(precision))
    x = x_vector(psi, part, precision)
    h = weil_height(psi, precision)
    with working_precision(precision):
        lhs = nabla(x, part.nonempty_blocks()) if part.size else RealBall(0)
        rhs = h * ext.top.degree
        main = compare_eq(lhs, rhs, tol, precision, note="nabla = [l:Q] h")
        subs = [compare_eq(s, RealBall(0), tol, precision, note="fiber sum")
                for s in fiber_sums(psi, part, precision)]
    state = combine([main, *subs])
    return Verdict(state, main.lhs, main.rhs, precision, main.tight, "nabla height identity",
                   {"relative_unit": rel, "fiber_sums": [s.state for s in subs], "identity": main.state})


# -- short relative units ------------------------------------------------------------------


@dataclass
class ShortRelativeUnits:
    units: list[FieldElement]
    exponents: list[tuple[int, ...]]  # on the subgroup basis
    heights: list[RealBall]  # [l:Q] h(psi_j)
    minima: MinimaResult
    index: int
    relative_regulator: RealBall
    lattice_det: Verdict
    bound: Verdict
    identities: list[Verdict] = field(default_factory=list)
    independence: Verdict | None = None

    @property
    def verdict(self) -> str:
        return combine([self.bound, self.lattice_det, *self.identities,
                        *( [self.independence] if self.independence else [])])


def subgroup_lattice(basis: RelativeUnitBasis, part: PlacePartition, c: Sequence[Sequence[int]],
                     precision: int = 128) -> LogLattice:
    """L(E') = M_{l/k} C, columns indexed by the subgroup basis."""
    n = basis.rank
    c = [list(map(int, row)) for row in c]

    def build(bits):
        m = relative_log_matrix(basis.elements, part, bits)
        with working_precision(bits):
            return [[ball_sum(m[i][k] * c[k][j] for k in range(n)) for i in range(n)] for j in range(n)]

    return LogLattice(build, n, part.S, part.nonempty_blocks(), precision)


def short_relative_units(basis: RelativeUnitBasis, part: PlacePartition,
                         c: Sequence[Sequence[int]] | None = None, precision: int = 128,
                         torsion_order_k: int = 2) -> ShortRelativeUnits:
    """Independent psi_j in the subgroup E' = <prod eta_i^{c_ij}> attaining the
    nabla-minima, with prod [l:Q] h(psi_j) <= r! Reg(E) [E:E'] certified."""
    n = basis.rank
    if n == 0:
        raise PreconditionError("relative unit rank is zero")
    c = [[int(i == j) for j in range(n)] for i in range(n)] if c is None else [list(map(int, r)) for r in c]
    index = abs(int(linalg.det(c)))
    if index == 0:
        raise PreconditionError("subgroup is not of full rank")
    ext = basis.ext
    lat = subgroup_lattice(basis, part, c, precision)
    res = successive_minima(lat, NormTag(NABLA, part.nonempty_blocks()))
    reg_e = relative_regulator(basis, part, precision)
    gens = []
    for j in range(n):
        g = ext.top.one
        for i in range(n):
            if c[i][j]:
                g = g * basis.elements[i] ** c[i][j]
        gens.append(g)
    psis = []
    for e in res.vectors:
        p = ext.top.one
        for g, k in zip(gens, e):
            if k:
                p = p * g ** int(k)
        psis.append(p)
    heights = [weil_height(p, precision) * ext.top.degree for p in psis]
    with working_precision(precision):
        tol = equality_tolerance(precision)
        det_l = lat.determinant(precision)
        det_v = compare_eq(det_l, reg_e * index, tol * max(1, float(det_l.mid)), precision,
                           note="|det L| = Reg(E) [E:E']")
        lhs = ball_prod(heights)
        rhs = reg_e * (factorial(n) * index)
        bound = compare_le(lhs, rhs, precision, tol, note="short relative unit bound")
        ids = [compare_eq(h, lam, tol, precision, note="nabla minimum = [l:Q] h") for h, lam in
               zip(heights, res.minima)]
        rows = relative_log_matrix(psis, part, precision)
        jd = abs(ball_det(rows))
    indep = Verdict(HOLDS if jd.excludes_zero() else UNDECIDED, jd, RealBall(0), precision,
                    note="independence")
    if res.state != HOLDS:
        bound = Verdict(UNDECIDED if bound.state == HOLDS else bound.state, bound.lhs, bound.rhs,
                        precision, note="minima undecided: " + res.note)
    return ShortRelativeUnits(psis, res.vectors, heights, res, index, reg_e, det_v, bound, ids, indep)


def squares_subgroup(rank: int) -> list[list[int]]:
    return [[2 * int(i == j) for j in range(rank)] for i in range(rank)]


# -- combined systems and the Costa ratio ------------------------------------------------------


def combined_system_check(ext: Extension, betas: Sequence[FieldElement], psis: Sequence[FieldElement],
                          reg_l: RealBall, precision: int = 128) -> Verdict:
    """Joint independence of k-units and relative units in l, and
    prod [k:Q]h(beta_i) * prod [l:Q]h(psi_j) <= r(l)! Reg(l)."""
    rl = ext.top.unit_rank
    rk = ext.base.unit_rank
    if len(betas) != rk or len(psis) != rl - rk:
        raise PreconditionError(f"need {rk} base units and {rl - rk} relative units")
    lifted = [ext.embed(b) for b in betas] + list(psis)
    n_pl = len(places(ext.top, precision))
    cols = [log_vector(u, precision) for u in lifted]
    with working_precision(precision):
        rows = [[cols[j][i] for j in range(rl)] for i in range(n_pl - 1)]
        jdet = abs(ball_det(rows)) if rl else RealBall(1)
        indep = HOLDS if jdet.excludes_zero() else UNDECIDED
        hb = [weil_height(b, precision) * ext.base.degree for b in betas]
        hp = [weil_height(p, precision) * ext.top.degree for p in psis]
        lhs = ball_prod(hb + hp)
        rhs = reg_l * factorial(rl)
        bound = compare_le(lhs, rhs, precision, equality_tolerance(precision))
    fact_ok = factorial(rk) * factorial(rl - rk) <= factorial(rl)
    state = combine([Verdict(indep), bound]) if fact_ok else FAILS
    return Verdict(state, lhs, rhs, precision, bound.tight, "combined unit system",
                   {"joint_rank_det": jdet, "independence": indep, "bound": bound.state,
                    "factorial": fact_ok})


def costa_index(reg_k: RealBall, reg_e: RealBall, reg_l: RealBall, precision: int = 128,
                rel_rank: int | None = None) -> tuple[int | None, Verdict]:
    """The integer Reg(l) / (Reg(k) Reg(E)); undecided unless the ratio ball
    contains exactly one integer >= 1."""
    if rel_rank == 0:
        raise PreconditionError("relative unit rank is zero")
    for r in (reg_k, reg_e, reg_l):
        if not r.is_positive():
            raise PreconditionError("regulators must be positive balls")
    with working_precision(precision):
        ratio = reg_l / (reg_k * reg_e)
    ints = [i for i in ratio.integers_inside() if i >= 1]
    if len(ints) == 1:
        return ints[0], Verdict(HOLDS, ratio, RealBall(ints[0]), precision, note="Costa ratio")
    return None, Verdict(UNDECIDED if len(ints) > 1 else FAILS, ratio, None, precision,
                         note=f"ratio ball contains {len(ints)} integers")


__all__ = [
    "Extension",
    "PlacePartition",
    "PreconditionError",
    "FiberMatchError",
    "RelativeUnitBasis",
    "ShortRelativeUnits",
    "relative_norm",
    "fiber_map",
    "place_partition",
    "x_vector",
    "fiber_sums",
    "relative_unit_kernel",
    "is_relative_unit",
    "relative_regulator",
    "nabla_height_identity_check",
    "subgroup_lattice",
    "short_relative_units",
    "squares_subgroup",
    "combined_system_check",
    "costa_index",
    "Fraction",
    "regulator",
]
