"""Unit systems, regulators, and short unit systems from successive minima."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .balls import (
    HOLDS,
    UNDECIDED,
    RealBall,
    Verdict,
    ball_det,
    ball_prod,
    combine,
    compare_eq,
    compare_le,
    equality_tolerance,
    precision_cap,
    working_precision,
)
from .embeddings import log_vector, places
from .field import FieldDataError, FieldElement, NumberField, is_algebraic_integer
from .heights import weil_height
from .minima import LogLattice, MinimaResult, minimum_bound_constant, successive_minima
from .norms import DELTA


class SingularUnitsError(ArithmeticError):
    """Units are multiplicatively dependent (regulator ball meets zero)."""


@dataclass
class UnitSystem:
    field: NumberField
    units: list[FieldElement]
    torsion_order: int = 2

    @property
    def rank(self) -> int:
        return len(self.units)

    def validate(self, precision: int = 128) -> None:
        """Integrality, |Norm| = 1 (exact), correct rank, nonzero regulator."""
        k = self.field
        for i, u in enumerate(self.units):
            if u.field is not k:
                raise FieldDataError(f"unit {i} lives in another field")
            if not is_algebraic_integer(u):
                raise FieldDataError(f"unit {i} is not an algebraic integer")
            nm = u.norm()
            if abs(nm) != 1:
                raise FieldDataError(f"unit {i} has norm {nm}, not +-1")
        if self.rank != k.unit_rank:
            raise FieldDataError(f"{self.rank} units given, unit rank is {k.unit_rank}")
        if self.torsion_order < 1 or self.torsion_order % 2:
            raise FieldDataError("torsion order must be a positive even integer")
        if self.rank:
            regulator(k, self, precision)

    def element(self, exponents: Sequence[int]) -> FieldElement:
        """prod units[i] ** exponents[i], computed exactly."""
        out = self.field.one
        for u, e in zip(self.units, exponents):
            if e:
                out = out * u ** int(e)
        return out


def log_matrix(units: Sequence[FieldElement], precision: int = 128) -> list[list[RealBall]]:
    """Rows indexed by places, columns by units: d_w log ||u||_w."""
    cols = [log_vector(u, precision) for u in units]
    return [[cols[j][i] for j in range(len(cols))] for i in range(len(cols[0]))] if cols else []


def regulator(field: NumberField, us: UnitSystem | Sequence[FieldElement], precision: int = 128,
              drop: int | None = None) -> RealBall:
    """|det| of the weighted log matrix with one archimedean place removed."""
    units = us.units if isinstance(us, UnitSystem) else list(us)
    r = field.unit_rank
    if len(units) != r:
        raise ValueError(f"need {r} units, got {len(units)}")
    if r == 0:
        return RealBall(1)
    nplaces = len(places(field, precision))
    drop = nplaces - 1 if drop is None else drop
    bits = precision
    cap = max(precision_cap(), precision)
    while True:
        with working_precision(bits):
            rows = log_matrix(units, bits)
            kept = [row for i, row in enumerate(rows) if i != drop]
            det = abs(ball_det(kept))
        if det.excludes_zero():
            return det
        if bits >= cap:
            raise SingularUnitsError("units are dependent: regulator ball contains 0")
        bits = min(2 * bits, cap)


def unit_lattice(field: NumberField, us: UnitSystem, precision: int = 128, drop: int | None = None) -> LogLattice:
    """Full unit log lattice on r coordinates (one place removed)."""
    n = len(places(field, precision))
    drop = n - 1 if drop is None else drop
    rows = [i for i in range(n) if i != drop]
    return LogLattice.from_units(us.units, rows, None, precision)


@dataclass
class SmallUnits:
    units: list[FieldElement]
    exponents: list[tuple[int, ...]]
    heights: list[RealBall]  # [k:Q] h(alpha_j)
    minima: MinimaResult
    regulator: RealBall
    product_bound: Verdict
    identities: list[Verdict] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return combine([self.product_bound, *self.identities])


def small_units(field: NumberField, us: UnitSystem, precision: int = 128) -> SmallUnits:
    """Independent units attaining the Schinzel-norm minima of the unit lattice.

    Certifies prod [k:Q] h(alpha_j) <= 2^r (r!)^3 / (2r)! * Reg(k), and the
    identity [k:Q] h(alpha) = delta(x(alpha)) for each returned unit, with the
    height computed independently from the minimal polynomial.
    """
    r = field.unit_rank
    if r < 1:
        raise ValueError("small_units needs unit rank >= 1")
    lat = unit_lattice(field, us, precision)
    res = successive_minima(lat, DELTA)
    reg = regulator(field, us, precision)
    elems = [us.element(e) for e in res.vectors]
    d = field.degree
    heights = [weil_height(a, precision) * d for a in elems]
    with working_precision(precision):
        lhs = ball_prod(heights)
        rhs = reg * minimum_bound_constant(r)
        bound = compare_le(lhs, rhs, precision, equality_tolerance(precision),
                           note="small unit product bound")
        ids = [
            compare_eq(h, lam, equality_tolerance(precision), precision, note="height = Schinzel norm")
            for h, lam in zip(heights, res.minima)
        ]
    if res.state != HOLDS and bound.state == HOLDS:
        bound.note += "; minima undecided"
    return SmallUnits(elems, res.vectors, heights, res, reg, bound, ids)


def check_units_independent(units: Sequence[FieldElement], rows: Sequence[int] | None = None,
                            precision: int = 128) -> Verdict:
    """Full-rank certificate for the log vectors of ``units`` on ``rows``."""
    if not units:
        return Verdict(HOLDS, note="empty system")
    mat = log_matrix(units, precision)
    if rows is None:
        rows = list(range(len(units)))
    kept = [mat[i] for i in rows]
    with working_precision(precision):
        det = abs(ball_det(kept))
    state = HOLDS if det.excludes_zero() else UNDECIDED
    return Verdict(state, det, RealBall(0), precision, note="joint log determinant")


__all__ = [
    "UnitSystem",
    "SmallUnits",
    "SingularUnitsError",
    "log_matrix",
    "regulator",
    "unit_lattice",
    "small_units",
    "check_units_independent",
    "minimum_bound_constant",
]
