import csv
import io
import json
from fractions import Fraction
from math import factorial, log as flog, log2

import pytest

from regforge import cli
from regforge.balls import FAILS, HOLDS, NOT_MET, UNDECIDED, RealBall
from regforge.cards import load_corpus
from regforge.checkers import (
    ALL_THEOREMS,
    ALLOWED_UNDECIDED,
    CSV_COLUMNS,
    amoroso_david_row,
    blocking_rows,
    check_intermediate_chain,
    check_prop_3_1,
    check_quadratic_and_friedman,
    check_thm_1_1,
    check_thm_1_2,
    check_voutier_dobrowolski,
    log_gamma_inv_thm12,
    run_corpus,
    silverman_constants_table,
    summarize,
    to_csv,
    to_json,
    voutier_threshold,
)

from .conftest import CORPUS

CORP = load_corpus(CORPUS)


def by_theorem(rows):
    return {r.theorem: r for r in rows}


def test_constants_against_closed_forms():
    for d in range(3, 13):
        ref = d ** log2(d) * flog(d) / 2
        assert abs(float(log_gamma_inv_thm12(d).mid) - ref) < 1e-9 * ref
    # the threshold is negative at d = 2 and positive from d = 3 on (loglog d > 0)
    assert voutier_threshold(2).mid < 0
    for d in range(3, 13):
        ref = 0.25 * (flog(flog(d)) / flog(d)) ** 3
        assert abs(float(voutier_threshold(d).mid) - ref) < 1e-12


def test_thm11_gate_and_fallback():
    # D = 23 < 3^3: the gate fails and the small-discriminant fallback applies
    rows = by_theorem(check_thm_1_1(CORP.cards["cubic-23"], CORP.posets["cubic-23"]))
    assert rows["thm11"].verdict == NOT_MET
    assert rows["thm11_fallback"].verdict == HOLDS
    rows = by_theorem(check_thm_1_1(CORP.cards["Q(sqrt2,sqrt3)"], CORP.posets["Q(sqrt2,sqrt3)"]))
    assert rows["thm11"].verdict == HOLDS and "thm11_fallback" not in rows
    rows = by_theorem(check_thm_1_2(CORP.cards["Q(sqrt2,sqrt3)"], CORP.posets["Q(sqrt2,sqrt3)"]))
    assert rows["thm12"].verdict == NOT_MET and rows["thm12_fallback"].verdict == HOLDS


def test_thm_gates_not_met_for_small_degree_and_cm():
    for label in ("Q(sqrt2)", "Q(zeta5)"):
        for fn in (check_thm_1_1, check_thm_1_2):
            rows = fn(CORP.cards[label], CORP.posets[label])
            assert rows[0].verdict == NOT_MET


def test_voutier_vacuous_at_degree_two():
    rows = check_voutier_dobrowolski(CORP.cards["Q(sqrt2)"])
    assert rows and all(r.verdict == HOLDS for r in rows)


def test_voutier_cubic():
    rows = check_voutier_dobrowolski(CORP.cards["cubic-49"])
    assert all(r.verdict == HOLDS for r in rows)


def test_quadratic_and_friedman_reference():
    rows = by_theorem(check_quadratic_and_friedman(CORP.cards["Q(sqrt2)"]))
    assert rows["quadratic"].verdict == HOLDS and rows["friedman"].verdict == HOLDS
    assert abs(float(rows["friedman"].rhs.mid) - 0.88137359) < 1e-8
    assert float(rows["friedman"].lhs.mid) == 0.2052
    assert abs(float(rows["quadratic"].lhs.mid) - flog(2) / 2) < 1e-12


def test_chain_rows():
    rows = by_theorem(check_intermediate_chain(CORP.cards["sextic-1229312"], CORP.posets["sextic-1229312"]))
    assert "chain_product" in rows
    assert all(r.verdict in (HOLDS, NOT_MET) for r in rows.values())


def test_amoroso_david_is_undecided_with_kappa():
    for label, rho in (("Q(sqrt2,sqrt3)", 1), ("sextic-1229312", 2), ("cubic-49", 0)):
        r = amoroso_david_row(CORP.cards[label], CORP.posets[label])
        assert r.verdict == UNDECIDED and r.theorem in ALLOWED_UNDECIDED
        assert r.details["kappa"] == (rho + 1) * factorial(rho + 1) - rho


def test_prop31_reproducible():
    card = CORP.cards["cubic-49"]
    a = [r.row() for r in check_prop_3_1(card, 3, seed=5)]
    b = [r.row() for r in check_prop_3_1(card, 3, seed=5)]
    assert a == b and all(r["verdict"] == HOLDS for r in a)


def test_silverman_table():
    tab = silverman_constants_table()
    assert [t["d"] for t in tab] == list(range(2, 13))
    assert tab[0]["thm12_c"] is None
    assert all(t["silverman_c"] == Fraction(1, 2 ** (4 * t["d"] ** 2)) for t in tab)
    with pytest.raises(ValueError):
        silverman_constants_table([13])


@pytest.fixture(scope="module")
def full_rows():
    return run_corpus(CORP, ALL_THEOREMS, seed=0)


def test_corpus_run_no_failures(full_rows):
    s = summarize(full_rows)
    assert s.get(FAILS, 0) == 0
    assert blocking_rows(full_rows) == []
    assert {r.theorem for r in full_rows if r.verdict == UNDECIDED} <= set(ALLOWED_UNDECIDED)


def test_csv_and_json_shape(full_rows):
    text = to_csv(full_rows)
    rd = list(csv.DictReader(io.StringIO(text)))
    assert list(rd[0]) == CSV_COLUMNS
    assert len(rd) == len(full_rows)
    doc = json.loads(to_json(full_rows, {"seed": 0}))
    assert doc["meta"]["seed"] == 0
    assert sum(len(v) for v in doc["cards"].values()) == len(full_rows)


def test_parallel_matches_serial(full_rows):
    par = run_corpus(CORP, ALL_THEOREMS, seed=0, workers=2, path=str(CORPUS))
    assert to_csv(par) == to_csv(full_rows)


# -- CLI -----------------------------------------------------------------------------------


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_validate(capsys):
    code, out, _ = run(["validate", str(CORPUS)], capsys)
    assert code == 0 and CORP.digest() in out


def test_cli_regulator(capsys):
    code, out, _ = run(["regulator", str(CORPUS / "Q_sqrt2.json")], capsys)
    assert code == 0 and "[0.88137358, 0.88137359]" in out


def test_cli_height(capsys):
    code, out, _ = run(["height", "Q(sqrt2)", "1+1*a", "--corpus", str(CORPUS)], capsys)
    assert code == 0 and "0.44068679" in out


def test_cli_minima_and_tower(capsys):
    assert run(["minima", "cubic-49", "--corpus", str(CORPUS)], capsys)[0] == 0
    code, out, _ = run(["tower", "sextic-1229312", "kstar", "--corpus", str(CORPUS)], capsys)
    assert code == 0 and "Q(sqrt2)" in out
    code, out, _ = run(["tower", "Q(sqrt2,sqrt3)", "aleph", "--corpus", str(CORPUS)], capsys)
    assert code == 0 and "1/64" in out


def test_cli_relative(capsys):
    for action in ("kernel", "regulator", "short-units"):
        code, _, _ = run(["relative", "Q(sqrt2,sqrt3)/Q(sqrt2)", action, "--corpus", str(CORPUS)], capsys)
        assert code == 0


def test_cli_verify_and_report(capsys, tmp_path):
    assert run(["verify", str(CORPUS), "--theorems", "thm11,thm12"], capsys)[0] == 0
    out = tmp_path / "r.csv"
    assert run(["report", str(CORPUS), "--theorems", "quadratic", "--out", str(out)], capsys)[0] == 0
    assert out.read_text().splitlines()[0] == ",".join(CSV_COLUMNS)


def test_cli_bootstrap(capsys, tmp_path):
    code, _, _ = run(["bootstrap-quadratic", "7", "--out", str(tmp_path)], capsys)
    assert code == 0
    assert load_corpus(tmp_path).labels() == ["Q(sqrt7)"]


@pytest.mark.parametrize("argv", [
    ["regulator", "no-such-card"],
    ["verify", "corpus", "--theorems", "thm99"],
    ["frobnicate"],
    ["minima", "cubic-49", "--norm", "nabla"],
    ["relative", "Q(sqrt2)", "kernel"],
])
def test_cli_usage_errors(argv, capsys):
    argv = argv + ["--corpus", str(CORPUS)] if argv[0] != "frobnicate" else argv
    with pytest.raises(SystemExit) as e:
        code = cli.main(argv)
        raise SystemExit(code)
    assert e.value.code == 64


def test_cli_schema_error(capsys, tmp_path):
    (tmp_path / "bad.json").write_text("{}")
    assert run(["validate", str(tmp_path)], capsys)[0] == 3


def test_fmt_ball_outward():
    b = RealBall(Fraction(1, 3))
    s = cli.fmt_ball(b, 4)
    lo, hi = (Fraction(x) for x in s.strip("[]").split(", "))
    assert lo <= Fraction(1, 3) <= hi
