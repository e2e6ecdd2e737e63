"""Certified complex embeddings and weighted logarithmic vectors.

Roots are approximated by Aberth iteration and then certified a posteriori
with the Weierstrass inclusion discs D(z_i, n|W_i|), where
W_i = p(z_i) / (lc * prod_{j != i} (z_i - z_j)).  When the discs are pairwise
disjoint each one holds exactly one root; a disc centred on the real axis then
holds a real root.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from mpmath import iv, mp

from .balls import (
    ComplexBall,
    RealBall,
    log,
    precision_cap,
    working_precision,
)
from .field import FieldDataError, FieldElement, NumberField
from .poly import RatPolynomial, sturm_real_root_count

logger = logging.getLogger(__name__)


class CertificationError(RuntimeError):
    """Root isolation could not be certified below the precision cap."""


def _aberth(coeffs: list[int], guard_bits: int, max_iter: int = 500):
    n = len(coeffs) - 1
    lc = coeffs[-1]
    poly = [mp.mpf(c) for c in reversed(coeffs)]  # highest degree first
    dpoly = [mp.mpf(c * (n - i)) for i, c in enumerate(poly[:-1])]
    bound = 1 + max(abs(mp.mpf(c) / lc) for c in coeffs[:-1])
    z = [bound * mp.expjpi(mp.mpf(2 * k + 0.5) / n) * mp.mpf("0.9") for k in range(n)]
    tol = mp.mpf(2) ** (-(mp.prec - guard_bits))
    for _ in range(max_iter):
        biggest = mp.mpf(0)
        new = []
        for i in range(n):
            zi = z[i]
            pv = mp.polyval(poly, zi)
            dv = mp.polyval(dpoly, zi)
            if pv == 0:
                new.append(zi)
                continue
            ratio = pv / dv if dv != 0 else mp.mpf(1)
            s = mp.fsum(1 / (zi - z[j]) for j in range(n) if j != i)
            step = ratio / (1 - ratio * s)
            new.append(zi - step)
            biggest = max(biggest, abs(step))
        z = new
        if biggest < tol:
            break
    return z


def _weierstrass_radius(coeffs: list[int], z: list, i: int) -> mp.mpf:
    n = len(coeffs) - 1
    zi = ComplexBall(RealBall(iv.mpf(z[i].real)), RealBall(iv.mpf(z[i].imag)))
    pv = ComplexBall(0)
    for c in reversed(coeffs):
        pv = pv * zi + c
    den = ComplexBall(coeffs[-1])
    for j in range(n):
        if j != i:
            zj = ComplexBall(RealBall(iv.mpf(z[j].real)), RealBall(iv.mpf(z[j].imag)))
            den = den * (zi - zj)
    w = abs(pv / den)
    return mp.mpf(w.hi) * n


def _isolate(coeffs: tuple[int, ...], bits: int, r1: int):
    n = len(coeffs) - 1
    guard = 24
    with working_precision(bits + guard):
        z = _aberth(list(coeffs), guard)
        # exactly r1 real roots: snap the r1 most nearly real approximations
        order = sorted(range(n), key=lambda k: abs(z[k].imag))
        real_idx = set(order[:r1])
        reals = sorted(mp.mpf(z[k].real) for k in real_idx)
        # pair conjugates: keep one representative per pair, rebuild symmetric set
        reps = _pair_conjugates([z[k] for k in order[r1:]])
        pts = [mp.mpc(x, 0) for x in reals] + reps + [mp.conj(w) for w in reps]
        if len(pts) != n:
            return None
        radii = [_weierstrass_radius(list(coeffs), pts, i) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if abs(pts[i] - pts[j]) <= radii[i] + radii[j]:
                return None
    return pts, radii, len(reals)


def _pair_conjugates(zs: list) -> list:
    ups = [w for w in zs if w.imag > 0]
    downs = [w for w in zs if w.imag <= 0]
    if len(ups) != len(downs):
        return []
    reps = []
    for u in sorted(ups, key=lambda w: (w.real, w.imag)):
        # average with the nearest conjugate partner to symmetrize
        partner = min(downs, key=lambda w: abs(w - mp.conj(u)))
        downs.remove(partner)
        reps.append((u + mp.conj(partner)) / 2)
    return reps


@lru_cache(maxsize=512)
def _certified_roots_cached(coeffs: tuple[int, ...], bits: int) -> tuple[ComplexBall, ...]:
    n = len(coeffs) - 1
    if n == 1:
        root = Fraction(-coeffs[0], coeffs[1])
        with working_precision(bits):
            return (ComplexBall(RealBall(root), RealBall(0)),)
    r1 = sturm_real_root_count(RatPolynomial(coeffs))
    cap = max(precision_cap(), bits)
    b = bits
    while True:
        res = _isolate(coeffs, b, r1)
        if res is not None:
            break
        if b >= cap:
            raise CertificationError(f"could not isolate roots of {coeffs} at {b} bits")
        logger.debug("root isolation failed at %d bits, escalating", b)
        b = min(2 * b, cap)
    pts, radii, nreal = res
    out = []
    with working_precision(max(b, bits) + 24):
        for k, (z, r) in enumerate(zip(pts, radii)):
            re = RealBall(iv.mpf([z.real - r, z.real + r]))
            if k < nreal:
                out.append(ComplexBall(re, RealBall(0)))
            else:
                out.append(ComplexBall(re, RealBall(iv.mpf([z.imag - r, z.imag + r]))))
    return tuple(out)


def certified_roots(p: RatPolynomial, precision: int = 128) -> list[ComplexBall]:
    """All roots of a squarefree polynomial as disjoint certified balls.

    Order: real roots ascending, then complex roots with positive imaginary
    part (sorted by real part), then their conjugates in the same order.
    """
    if not p.is_squarefree():
        raise ValueError("certified_roots needs a squarefree polynomial")
    return list(_certified_roots_cached(tuple(p.primitive_integer()), precision))


# -- places ---------------------------------------------------------------------


@dataclass(frozen=True)
class Place:
    index: int
    root: ComplexBall
    is_real: bool

    @property
    def local_degree(self) -> int:
        return 1 if self.is_real else 2


@dataclass(frozen=True)
class PlaceSet:
    places: tuple[Place, ...]
    precision: int

    @property
    def real_places(self) -> tuple[Place, ...]:
        return tuple(p for p in self.places if p.is_real)

    @property
    def complex_places(self) -> tuple[Place, ...]:
        return tuple(p for p in self.places if not p.is_real)

    @property
    def local_degrees(self) -> tuple[int, ...]:
        return tuple(p.local_degree for p in self.places)

    def __len__(self) -> int:
        return len(self.places)

    def __iter__(self):
        return iter(self.places)


@lru_cache(maxsize=256)
def _places_cached(coeffs: tuple[int, ...], bits: int) -> PlaceSet:
    roots = _certified_roots_cached(coeffs, bits)
    n = len(roots)
    r1 = sum(1 for z in roots if z.is_real())
    r2 = (n - r1) // 2
    chosen = list(roots[:r1]) + list(roots[r1:r1 + r2])
    places = tuple(Place(i, z, i < r1) for i, z in enumerate(chosen))
    return PlaceSet(places, bits)


def places(field: NumberField, precision: int = 128) -> PlaceSet:
    """Archimedean places: one certified root per real place / conjugate pair."""
    return _places_cached(tuple(field.min_poly.primitive_integer()), precision)


def signature(field: NumberField) -> tuple[int, int, int]:
    """(r1, r2, unit rank), checked against the field's declared signature."""
    d = field.degree
    r1 = sturm_real_root_count(field.min_poly)
    r2 = (d - r1) // 2
    if field.signature is not None and tuple(field.signature) != (r1, r2):
        raise FieldDataError(f"signature mismatch: computed {(r1, r2)}, declared {field.signature}")
    return r1, r2, r1 + r2 - 1


def _coord_ball(c: Fraction) -> RealBall:
    return RealBall(c)


def evaluate(a: FieldElement, place: Place, precision: int) -> ComplexBall:
    """sigma_v(a) as a certified ball (Horner in interval arithmetic)."""
    with working_precision(precision):
        if place.is_real:
            x = place.root.re
            acc = RealBall(0)
            for c in reversed(a.coords):
                acc = acc * x + _coord_ball(c)
            return ComplexBall(acc, RealBall(0))
        z = place.root
        acc = ComplexBall(0)
        for c in reversed(a.coords):
            acc = acc * z + _coord_ball(c)
        return acc


def abs_at(a: FieldElement, place: Place, precision: int) -> RealBall:
    """||a||_v, the usual absolute value at v."""
    val = evaluate(a, place, precision)
    with working_precision(precision):
        if place.is_real:
            return abs(val.re)
        return abs(val)


def log_vector(a: FieldElement, precision: int = 128, pl: PlaceSet | None = None) -> list[RealBall]:
    """[d_v * log ||a||_v] over all archimedean places.

    Evaluation precision is raised internally until every entry has radius
    below 2^-(precision - 32); cancellation in sigma_v(a) for elements with
    large coordinates would otherwise leave wide balls.
    """
    if a.is_zero():
        raise ValueError("log vector of zero")
    target = mp.ldexp(1, -max(precision - 32, precision // 2))
    cap = max(precision_cap(), precision)
    bits = precision
    while True:
        use = pl if (pl is not None and bits == precision) else places(a.field, bits)
        out = []
        ok = True
        for p in use:
            av = abs_at(a, p, bits)
            if not av.is_positive():
                ok = False
                break
            with working_precision(bits):
                out.append(log(av) * p.local_degree)
        if ok and all(x.rad <= target for x in out):
            break
        if bits >= cap:
            if not ok:
                raise ArithmeticError("could not separate an embedding from zero")
            break
        bits = min(2 * bits, cap)
    if bits == precision:
        return out
    with working_precision(precision):
        return [x + 0 for x in out]
