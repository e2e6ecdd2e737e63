from __future__ import annotations

import os
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from regforge.cards import load_corpus, quadratic_field
from regforge.field import NumberField
from regforge.poly import poly_from_ints

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=300,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def corpus():
    c = load_corpus(CORPUS)
    assert not c.errors, c.errors
    return c


@pytest.fixture(scope="session")
def qsqrt2():
    return quadratic_field(2)


@pytest.fixture(scope="session")
def cubic49():
    k = NumberField(poly_from_ints([-1, -2, 1, 1]), None, 49, (3, 0), "cubic-49")
    k.validate()
    return k


@pytest.fixture(scope="session")
def cbrt2():
    k = NumberField(poly_from_ints([-2, 0, 0, 1]), None, -108, (1, 1), "cubic-108")
    k.validate()
    return k


def frac_vec(xs):
    return [Fraction(x) for x in xs]


# -- acceptance summary ---------------------------------------------------------------------

_OUTCOMES: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    if report.when == "call" or report.outcome != "passed":
        if hasattr(report, "wasxfail"):
            out = "XFAIL" if report.skipped else "XPASS"
        else:
            out = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[report.outcome]
        _OUTCOMES.setdefault(report.nodeid.split("::")[-1], out)


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    from tests import test_acceptance as acc

    tr = terminalreporter
    tr.section("acceptance criteria")
    for name in sorted(_OUTCOMES):
        num = int(name.split("_")[2])
        key = "5 (n=2)" if name.endswith("_n2") else num
        label = f"criterion {key}"
        detail = acc.ACCEPTANCE.get(key, "")
        tr.write_line(f"{label:<18} {_OUTCOMES[name]:<5} {acc.CRITERIA[num]}" + (f" | {detail}" if detail else ""))
