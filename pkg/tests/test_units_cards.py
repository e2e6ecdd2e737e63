import json
import shutil
from fractions import Fraction
from math import isqrt

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from regforge.balls import HOLDS, RealBall
from regforge.cards import (
    CardError,
    bootstrap_quadratic,
    card_to_json,
    fundamental_unit_cf,
    load_corpus,
    parse_card,
    quadratic_field,
    squarefree_part,
    write_card,
)
from regforge.field import FieldDataError, NumberField
from regforge.poly import poly_from_ints
from regforge.saturate import (
    independent_subset,
    numeric_roots,
    pth_root,
    saturate,
    search_units,
    torsion_generator,
)
from regforge.units import (
    SingularUnitsError,
    UnitSystem,
    check_units_independent,
    regulator,
    small_units,
)

from .conftest import CORPUS


def pell_oracle(m):
    """Smallest unit > 1 of the maximal order of Q(sqrt m), by increasing y."""
    if m % 4 == 1:
        # (x + y sqrt m)/2 with x^2 - m y^2 = +-4
        y = 1
        while True:
            for t in (-4, 4):
                x2 = m * y * y + t
                if x2 > 0 and isqrt(x2) ** 2 == x2:
                    return isqrt(x2), y, 2
            y += 1
    y = 1
    while True:
        for t in (-1, 1):
            x2 = m * y * y + t
            if x2 > 0 and isqrt(x2) ** 2 == x2:
                return isqrt(x2), y, 1
        y += 1


SQUAREFREE = [m for m in range(2, 120) if squarefree_part(m) == m]


@pytest.mark.parametrize("m", SQUAREFREE)
def test_cf_unit_matches_pell_oracle(m):
    assert fundamental_unit_cf(m) == pell_oracle(m)


def test_regulator_q_sqrt2():
    k = quadratic_field(2)
    reg = regulator(k, [k.element([1, 1])], 128)
    assert abs(float(reg.mid) - 0.88137359) < 1e-8
    with mpmath.workprec(128):
        assert reg.contains(RealBall(mpmath.asinh(1))) or abs(reg.mid - mpmath.asinh(1)) < 2.0 ** -100


@pytest.mark.parametrize("n", [2, 3, 5, 6, 7, 13, 46, 331, 1021, 2379, 9973])
def test_bootstrap_cards_validate(n):
    card = parse_card(bootstrap_quadratic(n))
    u = card.units.units[0]
    assert abs(u.norm()) == 1
    reg = regulator(card.field, card.units)
    # real quadratic lower bound (1/2) log(D/4) <= Reg
    assert float(reg.mid) >= 0.5 * mpmath.log(card.field.abs_discriminant / 4)


def test_bootstrap_rejects():
    with pytest.raises(ValueError):
        bootstrap_quadratic(-5)
    with pytest.raises(ValueError):
        bootstrap_quadratic(9)


def test_regulator_invariance(cubic49):
    card = load_corpus(CORPUS).cards["cubic-49"]
    u1, u2 = card.units.units
    k = card.field
    r = regulator(k, [u1, u2])
    assert regulator(k, [u1 * u2, u2]).overlaps(r)
    assert regulator(k, [u1.inverse(), u2]).overlaps(r)
    assert regulator(k, [u1 ** 2, u2]).overlaps(r * 2)
    for drop in range(3):
        assert regulator(k, [u1, u2], drop=drop).overlaps(r)


def test_dependent_units_rejected():
    k = quadratic_field(2)
    u = k.element([1, 1])
    assert check_units_independent([u]).state == HOLDS
    with pytest.raises(SingularUnitsError):
        regulator(k, [k.one])


def test_unitsystem_validation(qsqrt2):
    with pytest.raises(FieldDataError, match="norm"):
        UnitSystem(qsqrt2, [qsqrt2.element([2, 1])], 2).validate()  # norm 2
    with pytest.raises(FieldDataError):
        UnitSystem(qsqrt2, [], 2).validate()
    with pytest.raises(FieldDataError):
        UnitSystem(qsqrt2, [qsqrt2.element([Fraction(1, 2), 1])], 2).validate()


def test_small_units_bound(corpus):
    for label in ("cubic-49", "Q(sqrt2,sqrt3)", "Q(zeta5)", "sextic-1229312"):
        card = corpus.cards[label]
        su = small_units(card.field, card.units)
        assert su.verdict == HOLDS
        assert su.minima.state == HOLDS


# -- saturation -------------------------------------------------------------------------


def test_saturate_recovers_square_root():
    k = quadratic_field(2)
    u = k.element([1, 1])
    rep = saturate(k, [u ** 2], k.from_int(-1), 2)
    assert rep.enlargements and 2 in rep.primes_checked
    w = rep.units[0]
    assert w in (u, -u, u.inverse(), -u.inverse())


def test_saturate_cube_in_cubic(corpus):
    card = corpus.cards["cubic-49"]
    k = card.field
    u1, u2 = card.units.units
    rep = saturate(k, [u1 ** 3, u2], k.from_int(-1), 2)
    assert (3, 0) in rep.enlargements
    assert regulator(k, rep.units).overlaps(regulator(k, [u1, u2]))


def test_saturate_keeps_fundamental(corpus):
    card = corpus.cards["Q(sqrt2,sqrt3)"]
    k = card.field
    rep = saturate(k, card.units.units, k.from_int(-1), 2)
    assert rep.enlargements == []


def test_pth_root():
    k = NumberField(poly_from_ints([-2, 0, 0, 1]), None, -108, (1, 1), "c")
    k.validate()
    roots = numeric_roots(k)
    a = k.gen + 1
    assert pth_root(a ** 3, 3, roots) in (a,)
    assert pth_root(a ** 2, 2, roots) in (a, -a)
    assert pth_root(a, 2, roots) is None


@pytest.mark.parametrize("coeffs,order", [([1, 0, 1], 4), ([1, 1, 1, 1, 1], 10), ([-2, 0, 1], 2), ([1, 1, 1], 6)])
def test_torsion(coeffs, order):
    k = NumberField(poly_from_ints(coeffs), None, None, None, "t")
    k.validate()
    _, tors = search_units(k, 1)
    z, t = torsion_generator(tors, k)
    assert t == order
    assert z ** t == k.one


def test_search_units_rank(cubic49):
    units, _ = search_units(cubic49, 2)
    roots = numeric_roots(cubic49)
    assert len(independent_subset(units, 2, roots)) == 2
    assert all(abs(u.norm()) == 1 for u in units)


# -- cards ---------------------------------------------------------------------------------


def test_corpus_loads(corpus):
    assert len(corpus) >= 20
    assert len(corpus.extensions) >= 3
    assert "Q(sqrt2,sqrt3)/Q(sqrt2)" in {e.label for e in corpus.extensions}
    q = corpus.cards["Q(sqrt2)"]
    assert q.field.trace_form_det(q.field.integral_basis) == 8


def q2_card():
    return bootstrap_quadratic(2)


def test_card_wrong_discriminant():
    raw = q2_card()
    raw["discriminant"] = "12"
    with pytest.raises(CardError, match="discriminant mismatch: computed 8") as e:
        parse_card(raw)
    assert e.value.label == "Q(sqrt2)" and e.value.path == "field"


def test_card_unit_of_norm_two():
    raw = q2_card()
    raw["fundamental_units"] = [["2", "1"]]
    with pytest.raises(CardError, match="norm") as e:
        parse_card(raw)
    assert e.value.path == "fundamental_units"


@pytest.mark.parametrize("mutate,path", [
    (lambda r: r.pop("min_poly"), "min_poly"),
    (lambda r: r.update(schema=2), "schema"),
    (lambda r: r.update(discriminant=8), "discriminant"),
    (lambda r: r.update(discriminant="8.5"), "discriminant"),
    (lambda r: r.update(signature=["2"]), "signature"),
    (lambda r: r.update(signature=["0", "1"]), "field"),
    (lambda r: r.update(fundamental_units=[["1"]]), "fundamental_units[0]"),
    (lambda r: r.update(torsion_order="3"), "fundamental_units"),
])
def test_card_schema_errors(mutate, path):
    raw = q2_card()
    mutate(raw)
    with pytest.raises(CardError) as e:
        parse_card(raw)
    assert e.value.path == path


def test_round_trip_card(corpus):
    for label in ("cubic-49", "Q(sqrt2,sqrt3)"):
        card = corpus.cards[label]
        raw = card_to_json(card.field, card.units.units, card.units.torsion_order,
                           [(l, card.field.element(e)) for l, e in card.subfields])
        back = parse_card(json.loads(json.dumps(raw)))
        assert back.field.discriminant == card.field.discriminant
        assert [u.coords for u in back.units.units] == [u.coords for u in card.units.units]


def test_dangling_reference(tmp_path):
    raw = q2_card()
    raw["subfields"] = [{"label": "nowhere", "embedding": ["0", "1"]}]
    write_card(raw, tmp_path)
    c = load_corpus(tmp_path)
    assert c.errors and "dangling" in str(c.errors[0])
    with pytest.raises(CardError):
        load_corpus(tmp_path, strict=True)


def test_invalid_json(tmp_path):
    (tmp_path / "bad.json").write_text("{not json")
    c = load_corpus(tmp_path)
    assert c.errors and c.errors[0].path == "$"


@settings(max_examples=5)
@given(st.randoms(use_true_random=False))
def test_digest_order_independent(tmp_path_factory, rnd):
    files = sorted(CORPUS.glob("*.json"))
    ref = load_corpus(CORPUS).digest()
    d = tmp_path_factory.mktemp("shuffled")
    order = list(files)
    rnd.shuffle(order)
    # file names carry a shuffled prefix so directory order differs
    for i, f in enumerate(order):
        shutil.copy(f, d / f"{i:03d}_{f.name}")
    assert load_corpus(d).digest() == ref


def test_load_idempotent():
    assert load_corpus(CORPUS).digest() == load_corpus(CORPUS).digest()
