"""Unit search and p-saturation, used to build and certify fundamental units.

A unit system U is fundamental once no element of U (times torsion) outside
U^p is a p-th power for every prime p <= Reg(U) / 0.2052: by Friedman's
absolute lower bound the index [O^x : <U, torsion>] = Reg(U)/Reg(k) is at
most Reg(U)/0.2052.  Nontrivial p-th power classes are detected by
characters modulo degree-one primes q = 1 (mod p) and confirmed by exact
root extraction.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, lcm
from typing import Sequence

import numpy as np
from mpmath import mp

from . import linalg
from .field import FieldElement, NumberField

logger = logging.getLogger(__name__)

FRIEDMAN_FLOOR = Fraction(2052, 10000)


def _primes_upto(n: int) -> list[int]:
    return [p for p in range(2, n + 1) if all(p % q for q in range(2, isqrt(p) + 1))]


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % q for q in range(2, isqrt(n) + 1))


# -- numerics ---------------------------------------------------------------------


def numeric_roots(k: NumberField, dps: int = 60) -> list:
    """All d roots: real ones ascending, then upper half-plane, then conjugates."""
    with mp.workdps(dps):
        coeffs = [mp.mpf(c.numerator) / c.denominator for c in reversed(k.min_poly.coeffs)]
        roots = mp.polyroots(coeffs, maxsteps=400, extraprec=4 * dps)
        eps = mp.mpf(10) ** (-dps // 2)
        real = sorted(mp.re(z) for z in roots if abs(mp.im(z)) < eps)
        upper = sorted((z for z in roots if mp.im(z) >= eps), key=lambda z: (mp.re(z), mp.im(z)))
        return list(real) + upper + [mp.conj(z) for z in upper]


def _eval(a: FieldElement, z):
    acc = mp.mpf(0)
    for c in reversed(a.coords):
        acc = acc * z + mp.mpf(c.numerator) / c.denominator
    return acc


def float_log_vector(a: FieldElement, roots) -> np.ndarray:
    r1 = sum(1 for z in roots if not isinstance(z, mp.mpc) or mp.im(z) == 0)
    r2 = (len(roots) - r1) // 2
    out = [float(mp.log(abs(_eval(a, z)))) for z in roots[: r1]]
    out += [2 * float(mp.log(abs(_eval(a, z)))) for z in roots[r1: r1 + r2]]
    return np.array(out)


# -- search ---------------------------------------------------------------------------


def search_units(k: NumberField, bound: int) -> tuple[list[FieldElement], list[FieldElement]]:
    """Units and roots of unity among integral-basis coordinates in [-bound, bound]^d."""
    d = k.degree
    roots = numeric_roots(k, 30)
    emb = np.array([[complex(_eval(w, z)) for w in k.integral_basis] for z in roots])
    units, torsion = [], []
    rng = range(-bound, bound + 1)
    for chunk in _chunks(itertools.product(rng, repeat=d), 200_000):
        x = np.array(chunk, dtype=float)
        vals = x @ emb.T
        absn = np.abs(vals)
        with np.errstate(divide="ignore"):
            lognorm = np.log(absn).sum(axis=1)
        hits = np.nonzero(np.abs(lognorm) < 1e-6)[0]
        for i in hits:
            c = chunk[i]
            a = sum((w * int(t) for w, t in zip(k.integral_basis, c) if t), k.zero)
            if a.is_zero() or abs(a.norm()) != 1:
                continue
            if np.all(np.abs(absn[i] - 1) < 1e-9):
                torsion.append(a)
            else:
                units.append(a)
    return units, torsion


def _chunks(it, n):
    buf = []
    for x in it:
        buf.append(x)
        if len(buf) == n:
            yield buf
            buf = []
    if buf:
        yield buf


def independent_subset(units: Sequence[FieldElement], rank: int, roots) -> list[FieldElement]:
    """Greedy independent set by ascending log-vector length."""
    scored = sorted(units, key=lambda u: (float(np.abs(float_log_vector(u, roots)).sum()), tuple(u.coords)))
    chosen: list[FieldElement] = []
    vecs: list[np.ndarray] = []
    for u in scored:
        v = float_log_vector(u, roots)[:rank]
        trial = np.array(vecs + [v])
        if np.linalg.matrix_rank(trial, tol=1e-8) > len(vecs):
            chosen.append(u)
            vecs.append(v)
            if len(chosen) == rank:
                break
    return chosen


def torsion_generator(torsion: Sequence[FieldElement], k: NumberField) -> tuple[FieldElement, int]:
    t = len({tuple(z.coords) for z in torsion}) or 2
    for z in torsion:
        if all(z ** (t // p) != k.one for p in _primes_upto(t) if t % p == 0):
            return z, t
    return -k.one, 2


# -- saturation -----------------------------------------------------------------------


def _poly_roots_mod(coeffs: Sequence[int], q: int) -> list[int]:
    return [x for x in range(q) if sum(c * pow(x, i, q) for i, c in enumerate(coeffs)) % q == 0]


def _reduce(a: FieldElement, r: int, q: int) -> int | None:
    acc = 0
    for c in reversed(a.coords):
        if c.denominator % q == 0:
            return None
        acc = (acc * r + c.numerator * pow(c.denominator, -1, q)) % q
    return acc


def _characters(gens: Sequence[FieldElement], k: NumberField, p: int, count: int, start: int = 2):
    """Rows chi(g) in Z/p for ``count`` degree-one primes q = 1 mod p."""
    coeffs = [int(c) for c in k.min_poly.coeffs]
    den = lcm(*(c.denominator for g in list(gens) + k.integral_basis for c in g.coords))
    rows = []
    q = start
    while len(rows) < count:
        q += 1
        if q % p != 1 or not _is_prime(q) or den % q == 0:
            continue
        # element of exact order p in F_q^*
        zeta = next(pow(h, (q - 1) // p, q) for h in range(2, q) if pow(h, (q - 1) // p, q) != 1)
        table = {pow(zeta, i, q): i for i in range(p)}
        for r in _poly_roots_mod(coeffs, q):
            vals = [_reduce(g, r, q) for g in gens]
            if any(v is None or v == 0 for v in vals):
                continue
            rows.append([table[pow(v, (q - 1) // p, q)] for v in vals])
            if len(rows) >= count:
                break
    return rows, q


def _kernel_mod_p(rows: list[list[int]], n: int, p: int) -> list[list[int]]:
    m = [list(r) for r in rows]
    piv_cols = []
    rank = 0
    for col in range(n):
        piv = next((i for i in range(rank, len(m)) if m[i][col] % p), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][col], -1, p)
        m[rank] = [x * inv % p for x in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][col] % p:
                f = m[i][col]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[rank])]
        piv_cols.append(col)
        rank += 1
    free = [c for c in range(n) if c not in piv_cols]
    basis = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for i, c in enumerate(piv_cols):
            v[c] = (-m[i][f]) % p
        basis.append(v)
    return basis


def pth_root(v: FieldElement, p: int, roots, dps: int = 80) -> FieldElement | None:
    """An integral w with w^p = v, or None; exact verification."""
    k = v.field
    d = k.degree
    r1 = sum(1 for z in roots if not isinstance(z, mp.mpc) or mp.im(z) == 0)
    r2 = (d - r1) // 2
    with mp.workdps(dps):
        vals = [_eval(v, z) for z in roots[: r1 + r2]]
        if p == 2 and any(mp.re(x) < 0 for x in vals[:r1]):
            return None
        real_roots = [mp.sign(x) * abs(x) ** (mp.mpf(1) / p) for x in vals[:r1]]
        cplx = [mp.exp(mp.log(x) / p) for x in vals[r1:]]
        unit = mp.exp(2j * mp.pi / p)
        emb = mp.matrix([[_eval(w, z) for w in k.integral_basis] for z in roots])
        sign_choices = itertools.product((1, -1), repeat=r1) if p == 2 else [(1,) * r1]
        for signs in sign_choices:
            if p == 2 and r1 and signs[0] == -1:
                continue  # w and -w
            for branches in itertools.product(range(p), repeat=r2):
                top = [s * x for s, x in zip(signs, real_roots)]
                cs = [x * unit ** b for x, b in zip(cplx, branches)]
                full = mp.matrix(top + cs + [mp.conj(x) for x in cs])
                try:
                    coords = mp.lu_solve(emb, full)
                except ZeroDivisionError:
                    return None
                ints = [int(mp.nint(mp.re(c))) for c in coords]
                if max(abs(mp.re(c) - n) for c, n in zip(coords, ints)) > mp.mpf("0.01"):
                    continue
                w = sum((b * n for b, n in zip(k.integral_basis, ints) if n), k.zero)
                if not w.is_zero() and w ** p == v:
                    return w
    return None


@dataclass
class SaturationReport:
    units: list[FieldElement]
    primes_checked: list[int]
    index_bound: float
    enlargements: list[tuple[int, int]]  # (prime, replaced position)


def saturate(k: NumberField, units: Sequence[FieldElement], torsion_gen: FieldElement, torsion_order: int,
             reg_float: float | None = None, max_rounds: int = 50) -> SaturationReport:
    """Make ``units`` p-saturated for every prime p <= Reg(U)/0.2052."""
    units = list(units)
    roots = numeric_roots(k)
    r = len(units)
    enlargements = []
    checked = []

    def reg_of(us):
        if not us:
            return 1.0
        m = np.array([float_log_vector(u, roots)[:r] for u in us])
        return abs(float(np.linalg.det(m)))

    reg = reg_float or reg_of(units)
    bound = reg / float(FRIEDMAN_FLOOR)
    p_list = _primes_upto(int(bound) + 1) if r else []
    for p in p_list:
        rounds = 0
        while True:
            rounds += 1
            if rounds > max_rounds:
                raise ArithmeticError(f"saturation at p={p} did not converge")
            gens = units + ([torsion_gen] if torsion_order % p == 0 else [])
            n = len(gens)
            rows, _ = _characters(gens, k, p, 3 * n + 8)
            kern = _kernel_mod_p(rows, n, p)
            kern = [v for v in kern if any(v[:r])]
            if not kern:
                break
            found = None
            for v in kern:
                e = list(v[:r])
                cand = k.one
                for u, t in zip(units, e):
                    if t:
                        cand = cand * u ** t
                if len(v) > r and v[r]:
                    cand = cand * torsion_gen ** v[r]
                w = pth_root(cand, p, roots)
                if w is not None:
                    found = (e, w)
                    break
            if not found:
                # characters were not yet sharp enough: add more
                rows2, _ = _characters(gens, k, p, 6 * n + 20, start=10_000)
                kern = [v for v in _kernel_mod_p(rows + rows2, n, p) if any(v[:r])]
                if not kern:
                    break
                raise ArithmeticError(f"p={p}: character kernel persists but no root found")
            e, w = found
            j = next(i for i, t in enumerate(e) if t)
            units[j] = w
            enlargements.append((p, j))
            logger.info("p=%d enlarged position %d", p, j)
        checked.append(p)
    return SaturationReport(units, checked, bound, enlargements)


def lll_units(k: NumberField, units: Sequence[FieldElement]) -> list[FieldElement]:
    """LLL-reduce a unit basis on its log vectors (exact unimodular change)."""
    from .minima import lll_columns

    units = list(units)
    if len(units) < 2:
        return units
    roots = numeric_roots(k, 40)
    r = len(units)
    b = np.array([float_log_vector(u, roots)[:r] for u in units]).T
    out = []
    for col in lll_columns(b):
        a = k.one
        for u, t in zip(units, col):
            if t:
                a = a * u ** int(t)
        out.append(a)
    return out


__all__ = [
    "FRIEDMAN_FLOOR",
    "numeric_roots",
    "float_log_vector",
    "search_units",
    "independent_subset",
    "torsion_generator",
    "pth_root",
    "saturate",
    "SaturationReport",
    "lll_units",
]
