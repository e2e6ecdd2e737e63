from fractions import Fraction
from math import log as flog

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from regforge.balls import HOLDS, RealBall, working_precision
from regforge.cards import quadratic_field
from regforge.field import NumberField, is_algebraic_integer, minimal_polynomial
from regforge.heights import (
    arakelov_height,
    discriminant_identity_check,
    dhm_check,
    f_k,
    mahler_log,
    module_index,
    power_height_bound_check,
    power_vector,
    product_basis,
    weil_height,
)
from regforge.poly import poly_from_ints

FIELDS = {
    "q2": quadratic_field(2),
    "q5": quadratic_field(5),
    "c49": NumberField(poly_from_ints([-1, -2, 1, 1]), None, 49, (3, 0), "c49"),
    "c108": NumberField(poly_from_ints([-2, 0, 0, 1]), None, -108, (1, 1), "c108"),
    "z5": NumberField(poly_from_ints([1, 1, 1, 1, 1]), None, 125, (0, 2), "z5"),
}
for _k in FIELDS.values():
    _k.validate()


def mahler_oracle(coeffs):
    roots = np.roots(list(reversed(coeffs)))
    return flog(abs(coeffs[-1])) + sum(flog(max(1.0, abs(z))) for z in roots)


@given(st.lists(st.integers(-30, 30), min_size=2, max_size=6).filter(lambda c: c[-1] != 0))
def test_mahler_against_numpy(coeffs):
    m = mahler_log(coeffs, 128)
    assert abs(float(m.mid) - mahler_oracle(coeffs)) < 1e-7 * max(1, abs(mahler_oracle(coeffs)))


@given(st.integers(-10 ** 6, 10 ** 6).filter(bool), st.integers(1, 10 ** 6))
def test_height_of_rationals(p, q):
    k = FIELDS["q2"]
    x = Fraction(p, q)
    h = weil_height(k.from_int(x), 128)
    assert abs(float(h.mid) - flog(max(abs(x.numerator), x.denominator))) < 1e-12


def test_height_of_fundamental_unit(qsqrt2):
    h = weil_height(qsqrt2.element([1, 1]), 128)
    with mpmath.workprec(200):
        ref = mpmath.log(1 + mpmath.sqrt(2)) / 2
    assert h.contains(RealBall(mpmath.mpf(ref))) or abs(h.mid - ref) < mpmath.mpf(2) ** -110


def elements(name, bound=5):
    k = FIELDS[name]
    return st.lists(st.integers(-bound, bound), min_size=k.degree, max_size=k.degree).map(k.element)


@given(st.sampled_from(sorted(FIELDS)).flatmap(elements), st.integers(1, 4))
def test_height_power_and_inverse(a, n):
    assume(not a.is_zero())
    h = weil_height(a, 128)
    hn = weil_height(a ** n, 128)
    hi = weil_height(a.inverse(), 128)
    assert abs(float(hn.mid) - n * float(h.mid)) < 1e-9
    assert abs(float(hi.mid) - float(h.mid)) < 1e-9


@given(st.sampled_from(sorted(FIELDS)).flatmap(elements))
def test_height_of_product_subadditive(a):
    assume(not a.is_zero())
    b = a + 1
    assume(not b.is_zero())
    assert float((weil_height(a * b)).mid) <= float(weil_height(a).mid + weil_height(b).mid) + 1e-9


def vectors(name, bound=4):
    k = FIELDS[name]
    el = st.lists(st.integers(-bound, bound), min_size=k.degree, max_size=k.degree).map(k.element)
    return st.lists(el, min_size=k.degree, max_size=k.degree)


@given(st.sampled_from(sorted(FIELDS)).flatmap(vectors), st.integers(-5, 5).filter(bool))
def test_arakelov_scale_invariant(v, c):
    # product formula: H(c v) = H(v) for c in k^*
    assume(any(not x.is_zero() for x in v))
    k = v[0].field
    cv = [x * k.from_int(c) * (k.gen + 2) for x in v]
    a, b = arakelov_height(v), arakelov_height(cv)
    assert abs(float(a.mid) - float(b.mid)) < 1e-9


@given(st.sampled_from(sorted(FIELDS)).flatmap(vectors))
def test_discriminant_identity_property(v):
    k = v[0].field
    assume(k.trace_form_det(v) != 0)
    ver = discriminant_identity_check(v)
    assert ver.details["identity"]
    assert ver.state == HOLDS
    assert ver.details["f_k"] == Fraction(ver.details["index"]) ** 2 * k.abs_discriminant


def poly_disc_oracle(a):
    """|disc| of the characteristic polynomial from numeric roots, rounded."""
    cs = [float(c) for c in a.charpoly().coeffs]
    roots = np.roots(list(reversed(cs)))
    d = 1.0
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            d *= abs(roots[i] - roots[j]) ** 2
    return round(d)


@pytest.mark.parametrize("name,coeffs,index", [
    ("q2", [0, 1], 1), ("q2", [0, 3], 3), ("q5", [0, 1], 2), ("c49", [0, 1], 1), ("c108", [0, 1], 1),
    ("z5", [0, 1], 1), ("c49", [1, 2, 0], 8),
])
def test_power_basis_index_oracle(name, coeffs, index):
    k = FIELDS[name]
    a = k.element(coeffs + [0] * (k.degree - len(coeffs)))
    assert is_algebraic_integer(a)
    v = power_vector(a, k.degree)
    disc = poly_disc_oracle(a)
    assert f_k(v) == disc
    idx = module_index(v)
    assert idx["via_change_of_basis"] ** 2 * k.abs_discriminant == disc
    assert idx["via_change_of_basis"] == idx["via_ratio"] == index


def test_fk_of_integral_basis_is_discriminant():
    for k in FIELDS.values():
        assert f_k(k.integral_basis) == k.abs_discriminant
        scaled = [w * Fraction(3, 7) for w in k.integral_basis]
        assert f_k(scaled) == k.abs_discriminant


def test_fk_zero_on_dependent():
    k = FIELDS["q2"]
    assert f_k([k.one, k.from_int(2)]) == 0
    with pytest.raises(ValueError):
        discriminant_identity_check([k.one, k.from_int(2)])


@pytest.mark.parametrize("name", sorted(FIELDS))
def test_power_height_bound(name):
    k = FIELDS[name]
    a = k.gen + 1
    for m in (1, 2, k.degree, k.degree + 2):
        assert power_height_bound_check(a, m).state == HOLDS


def test_product_basis_factorization():
    k = FIELDS["c108"]
    pb = product_basis([k.gen], [3])
    assert pb.verdict == HOLDS
    # the maximal order; Z[theta] has index 24 and would give wrong content ideals
    q = NumberField(poly_from_ints([1, 0, -10, 0, 1]),
                    [[1, 0, 0, 0], [0, Fraction(-9, 2), 0, Fraction(1, 2)], [0, Fraction(11, 2), 0, Fraction(-1, 2)],
                     [Fraction(-5, 4), Fraction(-9, 4), Fraction(1, 4), Fraction(1, 4)]], 2304, (4, 0), "b")
    q.validate()
    s2 = q.element([0, Fraction(-9, 2), 0, Fraction(1, 2)])
    s3 = q.element([0, Fraction(11, 2), 0, Fraction(-1, 2)])
    assert s2 * s2 == q.from_int(2)
    pb = product_basis([s2, s3], [2, 2])
    assert pb.verdict == HOLDS
    # log H(1, r2, r3, r6) = log sqrt 12 at every real place, no finite contribution
    with mpmath.workprec(100):
        assert abs(pb.factorization.lhs.mid - mpmath.log(12) / 2) < 1e-25
    with pytest.raises(ValueError):
        product_basis([s2, s2 * 3], [2, 2])


def test_dhm_bound():
    for k in FIELDS.values():
        a = k.gen + 1
        if minimal_polynomial(a).degree == k.degree:
            assert dhm_check(a).state == HOLDS
