"""Regenerate the desk corpus under corpus/.

Real quadratic cards come from the continued-fraction bootstrap.  Every other
card gets its units from a coefficient-box search followed by p-saturation
for all primes p <= Reg/0.2052, so the stored units are fundamental.
Composite fields are built as Q(a + b) from two fields with coprime
discriminants, whose maximal order is the tensor product of the two orders.

    python scripts/make_corpus.py [outdir]
"""

from __future__ import annotations

import sys
from fractions import Fraction as F
from pathlib import Path

from regforge import linalg
from regforge.cards import bootstrap_quadratic, card_to_json, parse_card, quadratic_field, write_card
from regforge.field import NumberField
from regforge.poly import RatPolynomial, poly_from_ints
from regforge.saturate import (
    independent_subset,
    lll_units,
    numeric_roots,
    saturate,
    search_units,
    torsion_generator,
)
from regforge.units import UnitSystem

QUADRATICS = [2, 3, 5, 6, 7, 10, 13, 19, 21, 46, 61, 94, 331, 509, 1021, 2379]


def companion(k: NumberField) -> list[list[F]]:
    d = k.degree
    c = k.min_poly.coeffs
    m = [[F(0)] * d for _ in range(d)]
    for i in range(1, d):
        m[i][i - 1] = F(1)
    for i in range(d):
        m[i][d - 1] = -F(c[i])
    return m


def kron(a, b):
    return [[x * y for x in ra for y in rb] for ra in a for rb in b]


def ident(n):
    return [[F(int(i == j)) for j in range(n)] for i in range(n)]


def compositum(k1: NumberField, k2: NumberField, label: str, disc: int, signature) -> tuple:
    """Q(a + b) with a, b the generators of k1, k2; returns the field and the
    images of a and b.  Tensor coordinates are indexed i * n + j for a^i b^j."""
    m, n = k1.degree, k2.degree
    mt = [[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(kron(companion(k1), ident(n)),
                                                          kron(ident(m), companion(k2)))]
    cp = linalg.charpoly_coeffs(mt)
    poly = RatPolynomial(cp)
    v = [F(int(i == 0)) for i in range(m * n)]
    powers = []
    for _ in range(m * n):
        powers.append(v)
        v = linalg.matvec(mt, v)
    to_theta = linalg.inverse(linalg.transpose(powers))

    def theta_coords(tensor):
        return linalg.matvec(to_theta, tensor)

    def tensor_of(x1, x2):
        return [a * b for a in x1 for b in x2]

    basis = [theta_coords(tensor_of(w1.coords, w2.coords)) for w1 in k1.integral_basis for w2 in k2.integral_basis]
    k = NumberField(poly, basis, disc, signature, label)
    k.validate()
    e1 = k.element(theta_coords(tensor_of([F(int(i == 1)) for i in range(m)], [F(int(j == 0)) for j in range(n)])))
    e2 = k.element(theta_coords(tensor_of([F(int(i == 0)) for i in range(m)], [F(int(j == 1)) for j in range(n)])))
    return k, e1, e2


def fundamental(k: NumberField, bound: int):
    units, tors = search_units(k, bound)
    zeta, t = torsion_generator(tors, k)
    roots = numeric_roots(k)
    ind = independent_subset(units, k.unit_rank, roots)
    if len(ind) < k.unit_rank:
        raise RuntimeError(f"{k.label}: box {bound} found rank {len(ind)} only")
    rep = saturate(k, ind, zeta, t)
    us = lll_units(k, rep.units)
    print(f"  {k.label}: {len(units)} units in box, torsion {t}, primes <= {rep.index_bound:.1f} checked, "
          f"enlargements {rep.enlargements}")
    return us, t


def main(out: str = "corpus") -> None:
    outdir = Path(out)
    cards = {}
    for n in QUADRATICS:
        c = bootstrap_quadratic(n)
        cards[c["label"]] = c
    q = {n: quadratic_field(n) for n in (2, 3, 5, 6, 10)}

    # Q itself, base of the absolute extensions
    kq = NumberField(poly_from_ints([0, 1]), None, 1, (1, 0), "Q")
    kq.validate()

    cubic49 = NumberField(poly_from_ints([-1, -2, 1, 1]), None, 49, (3, 0), "cubic-49")
    cubic81 = NumberField(poly_from_ints([1, -3, 0, 1]), None, 81, (3, 0), "cubic-81")
    cbrt2 = NumberField(poly_from_ints([-2, 0, 0, 1]), None, -108, (1, 1), "cubic-108")
    cubic23 = NumberField(poly_from_ints([-1, -1, 0, 1]), None, -23, (1, 1), "cubic-23")
    gauss = NumberField(poly_from_ints([1, 0, 1]), None, -4, (0, 1), "Q(i)")
    zeta5 = NumberField(poly_from_ints([1, 1, 1, 1, 1]), None, 125, (0, 2), "Q(zeta5)")
    for k in (cubic49, cubic81, cbrt2, cubic23, gauss, zeta5):
        k.validate()

    # Q(sqrt2, sqrt3) = Q(sqrt2) (x) Q(sqrt3) would need the non-coprime
    # discriminants 8 and 12; its maximal order is given explicitly instead.
    biq23 = NumberField(poly_from_ints([1, 0, -10, 0, 1]),
                        [[1, 0, 0, 0], [0, F(-9, 2), 0, F(1, 2)], [0, F(11, 2), 0, F(-1, 2)],
                         [F(-5, 4), F(-9, 4), F(1, 4), F(1, 4)]], 2304, (4, 0), "Q(sqrt2,sqrt3)")
    biq23.validate()
    s2 = biq23.element([0, F(-9, 2), 0, F(1, 2)])
    s3 = biq23.element([0, F(11, 2), 0, F(-1, 2)])
    s6 = s2 * s3

    biq25, r2, r5 = compositum(q[2], q[5], "Q(sqrt2,sqrt5)", 1600, (4, 0))
    sextic, t2, ta = compositum(q[2], cubic49, "sextic-1229312", 1229312, (6, 0))

    bounds = {"cubic-49": 3, "cubic-81": 3, "cubic-108": 3, "cubic-23": 3, "Q(i)": 2, "Q(zeta5)": 2,
              "Q(sqrt2,sqrt3)": 3, "Q(sqrt2,sqrt5)": 3, "sextic-1229312": 2}
    fields = [cubic49, cubic81, cbrt2, cubic23, gauss, zeta5, biq23, biq25, sextic]
    zeta = zeta5.gen
    sqrt5_in_zeta5 = zeta * 2 + zeta ** 4 * 2 + 1

    subfields = {
        "Q(sqrt2,sqrt3)": [("Q(sqrt2)", s2), ("Q(sqrt3)", s3), ("Q(sqrt6)", s6)],
        "Q(sqrt2,sqrt5)": [("Q(sqrt2)", r2), ("Q(sqrt5)", r5), ("Q(sqrt10)", r2 * r5)],
        "sextic-1229312": [("Q(sqrt2)", t2), ("cubic-49", ta)],
        "Q(zeta5)": [("Q(sqrt5)", sqrt5_in_zeta5)],
    }
    extensions = {
        "Q(sqrt2)": [("Q(sqrt2,sqrt3)", s2), ("Q(sqrt2,sqrt5)", r2), ("sextic-1229312", t2)],
        "Q(sqrt3)": [("Q(sqrt2,sqrt3)", s3)],
        "Q(sqrt6)": [("Q(sqrt2,sqrt3)", s6)],
        "Q(sqrt5)": [("Q(sqrt2,sqrt5)", r5)],
        "cubic-49": [("sextic-1229312", ta)],
        "Q": [("cubic-49", cubic49.gen * 0), ("cubic-108", cbrt2.gen * 0)],
    }
    for k in fields:
        units, t = fundamental(k, bounds[k.label])
        cards[k.label] = card_to_json(k, units, t, subfields.get(k.label, ()))
    cards["Q"] = card_to_json(kq, [], 2)
    for base, exts in extensions.items():
        cards[base]["extensions"] = [{"top": top, "embedding": [str(c) for c in e.coords]} for top, e in exts]
    outdir.mkdir(parents=True, exist_ok=True)
    for old in outdir.glob("*.json"):
        old.unlink()
    for label in sorted(cards):
        parse_card(cards[label])
        write_card(cards[label], outdir)
    print(f"wrote {len(cards)} cards to {outdir}")


if __name__ == "__main__":
    main(*sys.argv[1:])
