"""Theorem-level certified checks over a corpus, and report emission.

Every check returns one or more :class:`TheoremReport` rows.  Hypothesis
gates are decided before the inequality itself is evaluated.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import factorial
from typing import Iterable, Sequence

from mpmath import mp

from .balls import (
    FAILS,
    HOLDS,
    NOT_MET,
    UNDECIDED,
    RealBall,
    Verdict,
    ball_prod,
    ball_sum,
    combine,
    compare_le,
    compare_lt,
    equality_tolerance,
    exp,
    log,
    working_precision,
)
from .cards import Corpus, ExtensionData, FieldCard
from .heights import discriminant_identity_check
from .minima import minimum_bound_constant
from .relative import (
    combined_system_check,
    costa_index,
    nabla_height_identity_check,
    place_partition,
    relative_regulator,
    relative_unit_kernel,
    short_relative_units,
    squares_subgroup,
)
from .towers import (
    Q_LABEL,
    SubfieldPoset,
    aleph_gap_check,
    check_aleph_monotone,
    maximal_star_field,
    rho_and_cm,
    tower_degrees,
    verify_star_field,
)
from .units import log_matrix, regulator, small_units

logger = logging.getLogger(__name__)

FRIEDMAN = Fraction(2052, 10000)
THM12_CONSTANT = Fraction(2, 10)
CSV_COLUMNS = ["label", "theorem", "hypothesis", "lhs_lo", "lhs_hi", "rhs_lo", "rhs_hi", "verdict", "precision_bits"]
ALL_THEOREMS = ("prop31", "thm11", "thm12", "voutier", "quadratic", "friedman", "chain", "lemma61", "lemma62",
                "kstar", "lemma71", "thm13", "thm14", "costa", "amoroso_david")
# rows whose 'undecided' state is expected and does not break a run
ALLOWED_UNDECIDED = ("amoroso_david",)


@dataclass
class TheoremReport:
    label: str
    theorem: str
    hypothesis: str  # "met", "not-met: ...", or "n/a"
    lhs: RealBall | None
    rhs: RealBall | None
    verdict: str
    precision: int = 128
    note: str = ""
    details: dict = field(default_factory=dict)

    @property
    def margin(self) -> RealBall | None:
        if self.lhs is None or self.rhs is None:
            return None
        with working_precision(max(self.precision, 64)):
            return self.rhs - self.lhs

    def row(self) -> dict:
        def fmt(x):
            return "" if x is None else mp.nstr(x, 20, strip_zeros=False)

        return {
            "label": self.label,
            "theorem": self.theorem,
            "hypothesis": self.hypothesis,
            "lhs_lo": fmt(self.lhs.lo) if self.lhs is not None else "",
            "lhs_hi": fmt(self.lhs.hi) if self.lhs is not None else "",
            "rhs_lo": fmt(self.rhs.lo) if self.rhs is not None else "",
            "rhs_hi": fmt(self.rhs.hi) if self.rhs is not None else "",
            "verdict": self.verdict,
            "precision_bits": str(self.precision),
        }

    def to_json(self) -> dict:
        out = self.row()
        out["note"] = self.note
        out["details"] = _jsonable(self.details)
        return out


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in sorted(x.items(), key=lambda kv: str(kv[0]))}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, RealBall):
        return [mp.nstr(x.lo, 20), mp.nstr(x.hi, 20)]
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, Verdict):
        return x.state
    if isinstance(x, (int, float, str, bool)) or x is None:
        return x
    return str(x)


def _report(label, theorem, v: Verdict, hypothesis="met", note="", details=None) -> TheoremReport:
    return TheoremReport(label, theorem, hypothesis, v.lhs, v.rhs, v.state, v.precision or 128,
                         note or v.note, dict(details or v.details))


def _not_met(label, theorem, why: str) -> TheoremReport:
    return TheoremReport(label, theorem, f"not-met: {why}", None, None, NOT_MET, 128, why)


# -- constants --------------------------------------------------------------------------


def log_gamma_inv_thm11(d: int) -> RealBall:
    """log(1/gamma_d) = d log d."""
    return log(RealBall(d)) * d


def d_pow_log2d(d: int) -> RealBall:
    """d^(log_2 d) = exp((log d)^2 / log 2), as a ball."""
    ld = log(RealBall(d))
    return exp(ld * ld / log(RealBall(2)))


def log_gamma_inv_thm12(d: int) -> RealBall:
    return d_pow_log2d(d) * log(RealBall(d)) / 2


def log_gamma_inv_silverman(d: int) -> RealBall:
    """log(1/gamma_d) = d^(log_2 8d) log d."""
    ld = log(RealBall(d))
    return exp(ld * log(RealBall(8 * d)) / log(RealBall(2))) * ld


def voutier_threshold(d: int) -> RealBall:
    """1/4 (log log d / log d)^3."""
    ld = log(RealBall(d))
    return (log(ld) / ld) ** 3 / 4


def _reg(card: FieldCard, precision: int) -> RealBall:
    return regulator(card.field, card.units, precision)


def _gate(log_disc: RealBall, log_ginv: RealBall, precision: int) -> str:
    """State of 1 < gamma D, i.e. log D - log(1/gamma) > 0."""
    v = compare_lt(log_ginv, log_disc, precision)
    return {HOLDS: "met", FAILS: "not-met"}.get(v.state, "undecided")


# -- regulator lower bounds (thm11, thm12) ---------------------------------------------------------------------


def _cm_or_small(card: FieldCard, poset: SubfieldPoset, theorem: str):
    d = card.degree
    rho, cm = rho_and_cm(poset)
    if d < 3:
        return _not_met(card.label, theorem, "degree < 3"), rho
    if cm:
        return _not_met(card.label, theorem, "CM field (rho = r)"), rho
    return None, rho


def check_small_disc_fallback(card: FieldCard, log_ginv: RealBall, theorem: str, precision: int = 128) -> TheoremReport:
    """log D < 5 log(1/gamma_d) Reg(k), the bound that replaces the theorem when gamma_d D <= 1."""
    with working_precision(precision):
        lhs = log(RealBall(card.field.abs_discriminant))
        rhs = log_ginv * 5 * _reg(card, precision)
        v = compare_lt(lhs, rhs, precision, note="small discriminant fallback")
    return _report(card.label, theorem + "_fallback", v, "met: gamma D <= 1")


def check_thm_1_1(card: FieldCard, poset: SubfieldPoset, precision: int = 128) -> list[TheoremReport]:
    early, rho = _cm_or_small(card, poset, "thm11")
    if early:
        return [early]
    k = card.field
    d, r = k.degree, k.unit_rank
    with working_precision(precision):
        log_disc = log(RealBall(k.abs_discriminant))
        lg = log_gamma_inv_thm11(d)
    gate = "met" if k.abs_discriminant > d ** d else "not-met"
    if gate != "met":
        return [_not_met(k.label, "thm11", f"gamma_d D = D/{d}^{d} <= 1"),
                check_small_disc_fallback(card, lg, "thm11", precision)]
    with working_precision(precision):
        ld = log(RealBall(d))
        c = RealBall(Fraction(factorial(2 * r), factorial(r) ** 3))
        lhs = c * (log(ld) / (ld * 2)) ** (3 * rho) * ((log_disc - lg) / (4 * d)) ** (r - rho)
        v = compare_le(lhs, _reg(card, precision), precision, equality_tolerance(precision), "regulator bound, d^d gate")
    return [_report(k.label, "thm11", v, details={"rho": rho, "r": r, "d": d})]


def check_thm_1_2(card: FieldCard, poset: SubfieldPoset, precision: int = 128) -> list[TheoremReport]:
    early, rho = _cm_or_small(card, poset, "thm12")
    if early:
        return [early]
    k = card.field
    d, r = k.degree, k.unit_rank
    with working_precision(precision):
        log_disc = log(RealBall(k.abs_discriminant))
        lg = log_gamma_inv_thm12(d)
    gate = _gate(log_disc, lg, precision)
    if gate == "undecided":
        return [TheoremReport(k.label, "thm12", "undecided", log_disc, lg, UNDECIDED, precision, "gate undecided")]
    if gate == "not-met":
        return [_not_met(k.label, "thm12", "gamma_d D <= 1"), check_small_disc_fallback(card, lg, "thm12", precision)]
    with working_precision(precision):
        base = (log_disc - lg) * 2 / (d_pow_log2d(d) * (d - 2))
        lhs = RealBall(THM12_CONSTANT) / factorial(r) * base ** (r - rho)
        v = compare_le(lhs, _reg(card, precision), precision, equality_tolerance(precision), "regulator bound, rho gate")
    return [_report(k.label, "thm12", v, details={"rho": rho, "r": r, "d": d})]


# -- auxiliary height and regulator bounds -------------------------------------------------------


def unit_box_heights(card: FieldCard, box: int = 2, precision: int = 128) -> list[tuple[tuple[int, ...], RealBall]]:
    """[k:Q] h(gamma) for gamma = prod u_i^e_i, 0 < max|e_i| <= box, one of each +-e pair.

    For a unit, [k:Q] h = 1/2 sum_w |d_w log||gamma||_w|, and the log vector is
    linear in the exponents, so no minimal polynomial is needed."""
    units = card.units.units
    r = len(units)
    if r == 0:
        return []
    with working_precision(precision):
        m = log_matrix(units, precision)
        out = []
        for e in product(range(-box, box + 1), repeat=r):
            first = next((t for t in e if t), 0)
            if first <= 0:
                continue
            col = [ball_sum(row[i] * e[i] for i in range(r) if e[i]) for row in m]
            out.append((e, ball_sum(abs(x) for x in col) / 2))
    return out


def check_voutier_dobrowolski(card: FieldCard, precision: int = 128, box: int = 2) -> list[TheoremReport]:
    k = card.field
    d = k.degree
    if d < 2:
        return [_not_met(k.label, "voutier", "degree < 2")]
    if k.unit_rank == 0:
        return [_not_met(k.label, "voutier", "no units of infinite order")]
    with working_precision(precision):
        thr = voutier_threshold(d)
    hs = unit_box_heights(card, box, precision)
    if thr.is_negative():
        return [TheoremReport(k.label, "voutier", "met", min((h for _, h in hs), key=lambda b: b.mid), thr, HOLDS,
                              precision, "vacuous: threshold is negative for d = 2", {"products": len(hs)})]
    states = [compare_le(thr, h, precision) for _, h in hs]
    worst = min(range(len(hs)), key=lambda i: hs[i][1].mid)
    state = combine(states)
    return [TheoremReport(k.label, "voutier", "met", thr, hs[worst][1], state, precision,
                          "Voutier/Dobrowolski over exponent box", {"products": len(hs), "minimizer": hs[worst][0]})]


def check_quadratic_and_friedman(card: FieldCard, precision: int = 128) -> list[TheoremReport]:
    k = card.field
    out = []
    with working_precision(precision):
        reg = _reg(card, precision)
        if k.degree == 2 and k.signature == (2, 0):
            lhs = log(RealBall(Fraction(k.abs_discriminant, 4))) / 2
            out.append(_report(k.label, "quadratic", compare_le(lhs, reg, precision, note="(1/2) log(D/4) <= Reg")))
        else:
            out.append(TheoremReport(k.label, "quadratic", "n/a", None, None, NOT_MET, precision, "not real quadratic"))
        out.append(_report(k.label, "friedman", compare_le(RealBall(FRIEDMAN), reg, precision, note="0.2052 <= Reg")))
    return out


def check_intermediate_chain(card: FieldCard, poset: SubfieldPoset, precision: int = 128) -> list[TheoremReport]:
    """Short units, their tower degrees, and the discriminant-height chain."""
    k = card.field
    d, r = k.degree, k.unit_rank
    rho, cm = rho_and_cm(poset)
    if r == 0:
        return [_not_met(k.label, "chain", "unit rank 0")]
    if cm:
        return [_not_met(k.label, "chain", "CM field")]
    su = small_units(k, card.units, precision)
    order = sorted(range(r), key=lambda i: (su.heights[i].mid, su.exponents[i]))
    alphas = [su.units[i] for i in order]
    hts = [su.heights[i] for i in order]
    td = tower_degrees(k, alphas, precision)
    rows = [_report(k.label, "chain_product", su.product_bound,
                    details={"constant": minimum_bound_constant(r), "minima": su.minima.state}),

            _report(k.label, "chain_tower", td.discriminant_bound,
                    details={"N": td.degrees, "q": td.q, "generates": td.generates})]
    if su.minima.state != HOLDS and rows[0].verdict == HOLDS:
        rows[0].verdict = UNDECIDED
    with working_precision(precision):
        gap = log(RealBall(k.abs_discriminant)) - log(RealBall(d)) * d
    if not gap.is_positive():
        rows.append(_not_met(k.label, "chain_extra", "log D - d log d <= 0"))
        return rows
    with working_precision(precision):
        lhs = (gap / (2 * d)) ** (r - rho)
        rhs = ball_prod(hts[rho:])
        v = compare_le(lhs, rhs, precision, equality_tolerance(precision), "discriminant power vs heights")
    rows.append(_report(k.label, "chain_extra", v, details={"rho": rho}))
    return rows


def amoroso_david_row(card: FieldCard, poset: SubfieldPoset) -> TheoremReport:
    rho, _ = rho_and_cm(poset)
    kappa = (rho + 1) * factorial(rho + 1) - rho
    return TheoremReport(card.label, "amoroso_david", "n/a", None, None, UNDECIDED, 0,
                         "not checkable (non-explicit constant c)", {"kappa": kappa, "rho": rho})


def silverman_constants_table(d_range: Iterable[int] = range(2, 13), precision: int = 128) -> list[dict]:
    """Gate constants log(1/gamma_d) of Silverman and of the thm11/thm12 checks, with
    the coefficient of (log gamma D)^r for a totally real field (r = d - 1, rho = 0)."""
    rows = []
    for d in d_range:
        if not 2 <= d <= 12:
            raise ValueError("d must lie in 2..12")
        r = d - 1
        with working_precision(precision):
            ls, l11, l12 = log_gamma_inv_silverman(d), log_gamma_inv_thm11(d), log_gamma_inv_thm12(d)
            c11 = RealBall(Fraction(factorial(2 * r), factorial(r) ** 3)) / RealBall(4 * d) ** r
            c12 = (RealBall(THM12_CONSTANT) / factorial(r) * (RealBall(2) / (d_pow_log2d(d) * (d - 2))) ** r
                   if d > 2 else None)
        # gamma_a < gamma_b  <=>  log(1/gamma_a) > log(1/gamma_b)
        s_lt_12 = l12.certainly_lt(ls)
        t12_lt_11 = l11.certainly_lt(l12)
        rows.append({
            "d": d,
            "silverman_c": Fraction(1, 2 ** (4 * d * d)),
            "silverman_log_gamma_inv": ls,
            "thm11_log_gamma_inv": l11,
            "thm12_log_gamma_inv": l12,
            "thm11_c": c11,
            "thm12_c": c12,
            "silverman_gamma_below_thm12": s_lt_12,
            "thm12_gamma_below_thm11": t12_lt_11,
        })
    return rows


# -- heights identity on random vectors --------------------------------------------------------


def random_integral_vector(card: FieldCard, rng: random.Random, bound: int = 3):
    k = card.field
    d = k.degree
    while True:
        v = []
        for _ in range(d):
            coeffs = [rng.randint(-bound, bound) for _ in range(d)]
            v.append(sum((w * c for w, c in zip(k.integral_basis, coeffs) if c), k.zero))
        if k.trace_form_det(v) != 0:
            return v


def check_prop_3_1(card: FieldCard, count: int, seed: int, precision: int = 128) -> list[TheoremReport]:
    rng = random.Random(f"{seed}:{card.label}")
    out = []
    if card.degree < 2:
        return [_not_met(card.label, "prop31", "degree 1")]
    for i in range(count):
        v = random_integral_vector(card, rng)
        ver = discriminant_identity_check(v, precision)
        out.append(_report(card.label, "prop31", ver, note=f"vector {i}",
                           details={"f_k": ver.details["f_k"], "index": ver.details["index"],
                                    "exact_identity": ver.details["identity"]}))
    return out


# -- posets ----------------------------------------------------------------------------------


def check_poset(card: FieldCard, poset: SubfieldPoset) -> list[TheoremReport]:
    label = card.label
    rows = [_report(label, "lemma61", check_aleph_monotone(poset))]
    gens = [(n.label, n.embedding) for n in poset.nodes.values() if n.embedding is not None]
    gap_states = []
    tight = 0
    for sub in sorted(poset.nodes):
        for glabel, alpha in sorted(gens, key=lambda g: g[0]):
            if poset.contains(glabel, sub):
                continue
            v = aleph_gap_check(poset, sub, alpha)
            gap_states.append(v)
            tight += v.tight
    if gap_states:
        rows.append(TheoremReport(label, "lemma62", "met", None, None, combine(gap_states), 0,
                                  f"{len(gap_states)} admissible pairs", {"pairs": len(gap_states), "tight": tight}))
    else:
        rows.append(_not_met(label, "lemma62", "no admissible pair"))
    if poset.top_label != Q_LABEL:
        ks = maximal_star_field(poset)
        rows.append(_report(label, "kstar", verify_star_field(poset, ks), details={"k_star": ks}))
    return rows


# -- extensions ------------------------------------------------------------------------------


def check_extension(ed: ExtensionData, precision: int = 128) -> list[TheoremReport]:
    ext = ed.ext
    label = ed.label
    rk, rl = ed.base.field.unit_rank, ed.top.field.unit_rank
    if rl - rk == 0:
        return [_not_met(label, t, "relative unit rank 0") for t in ("lemma71", "thm13", "thm14", "costa")]
    basis = relative_unit_kernel(ext, ed.top.units, ed.base.units, precision)
    part = place_partition(ext, "smallest", precision)
    part2 = place_partition(ext, "largest", precision)
    reg_e = relative_regulator(basis, part, precision)
    reg_e2 = relative_regulator(basis, part2, precision)
    reg_l = _reg(ed.top, precision)
    reg_k = _reg(ed.base, precision)
    t = ed.base.units.torsion_order
    ids = [nabla_height_identity_check(e, ext, part, t, precision) for e in basis.elements]
    rows = [TheoremReport(label, "lemma71", "met", ids[0].lhs, ids[0].rhs, combine(ids), precision,
                          "nabla = [l:Q] h on the kernel basis",
                          {"elements": len(ids), "drop_rule_invariant": reg_e.overlaps(reg_e2)})]
    full = short_relative_units(basis, part, None, precision, t)
    sq = short_relative_units(basis, part, squares_subgroup(basis.rank), precision, t)
    for name, s in (("thm13", full), ("thm13_squares", sq)):
        rows.append(_report(label, name, s.bound, details={
            "index": s.index, "lattice_det": s.lattice_det.state, "independence": s.independence.state,
            "identities": combine(s.identities), "overall": s.verdict}))
        if s.verdict != HOLDS:
            rows[-1].verdict = s.verdict
    betas = small_units(ed.base.field, ed.base.units, precision).units if rk else []
    cs = combined_system_check(ext, betas, full.units, reg_l, precision)
    rows.append(_report(label, "thm14", cs))
    idx, cv = costa_index(reg_k, reg_e, reg_l, precision)
    agree = idx == basis.norm_image_index
    state = cv.state if agree else FAILS
    rows.append(TheoremReport(label, "costa", "met", cv.lhs, cv.rhs, state, precision,
                              "Reg(l) / (Reg(k) Reg(E)) integral",
                              {"ratio_integer": idx, "norm_image_index": basis.norm_image_index}))
    return rows


# -- corpus runs --------------------------------------------------------------------------------


def card_rows(card: FieldCard, poset: SubfieldPoset | None, sel: set[str], seed: int = 0,
              precision: int = 128, prop31_count: int = 4) -> list[TheoremReport]:
    rows: list[TheoremReport] = []
    label = card.label
    try:
        if "prop31" in sel and card.degree >= 2:
            rows += check_prop_3_1(card, prop31_count, seed, precision)
        if poset is not None:
            if "thm11" in sel:
                rows += check_thm_1_1(card, poset, precision)
            if "thm12" in sel:
                rows += check_thm_1_2(card, poset, precision)
            if "chain" in sel:
                rows += check_intermediate_chain(card, poset, precision)
            if sel & {"lemma61", "lemma62", "kstar"}:
                rows += [r for r in check_poset(card, poset) if r.theorem in sel]
            if "amoroso_david" in sel:
                rows.append(amoroso_david_row(card, poset))
        if "voutier" in sel:
            rows += check_voutier_dobrowolski(card, precision)
        if sel & {"quadratic", "friedman"}:
            rows += [r for r in check_quadratic_and_friedman(card, precision) if r.theorem in sel]
    except Exception as e:  # surfaced per card, the run continues
        logger.error("%s: %s", label, e)
        rows.append(TheoremReport(label, "error", "n/a", None, None, UNDECIDED, precision, repr(e)))
    return rows


def extension_rows(ed: ExtensionData, sel: set[str], precision: int = 128) -> list[TheoremReport]:
    if not sel & {"lemma71", "thm13", "thm14", "costa"}:
        return []
    try:
        return [r for r in check_extension(ed, precision) if r.theorem.split("_")[0] in sel]
    except Exception as e:
        logger.error("%s: %s", ed.label, e)
        return [TheoremReport(ed.label, "error", "n/a", None, None, UNDECIDED, precision, repr(e))]


_WORKER_CORPUS: Corpus | None = None


def _worker_init(path: str) -> None:
    global _WORKER_CORPUS
    from .cards import load_corpus

    _WORKER_CORPUS = load_corpus(path)


def _worker_task(task: tuple) -> list[TheoremReport]:
    kind, label, sel, seed, precision, count = task
    c = _WORKER_CORPUS
    if kind == "card":
        return card_rows(c.cards[label], c.posets.get(label), sel, seed, precision, count)
    return extension_rows(c.extension(label), sel, precision)


def _check_selection(theorems: Sequence[str]) -> set[str]:
    unknown = set(theorems) - set(ALL_THEOREMS)
    if unknown:
        raise ValueError(f"unknown theorem ids: {sorted(unknown)}")
    return set(theorems)


def run_corpus(corpus: Corpus, theorems: Sequence[str] = ALL_THEOREMS, seed: int = 0, precision: int = 128,
               prop31_count: int = 4, workers: int = 1, path: str | None = None) -> list[TheoremReport]:
    """All selected checks on every card and extension, ordered by label.

    With ``workers > 1`` each card and extension is a separate task in a
    process pool (every worker reloads the corpus from ``path``); the output
    order does not depend on scheduling."""
    sel = _check_selection(theorems)
    tasks = [("card", l, sel, seed, precision, prop31_count) for l in corpus.labels()]
    tasks += [("ext", e.label, sel, seed, precision, prop31_count) for e in corpus.extensions]
    if workers > 1:
        if path is None:
            raise ValueError("parallel runs need the corpus path")
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(workers, initializer=_worker_init, initargs=(str(path),)) as pool:
            chunks = list(pool.map(_worker_task, tasks))
    else:
        chunks = []
        for kind, label, *_ in tasks:
            if kind == "card":
                chunks.append(card_rows(corpus.cards[label], corpus.posets.get(label), sel, seed, precision,
                                        prop31_count))
            else:
                chunks.append(extension_rows(corpus.extension(label), sel, precision))
    return [r for chunk in chunks for r in chunk]


def summarize(rows: Sequence[TheoremReport]) -> dict[str, int]:
    out = {HOLDS: 0, FAILS: 0, UNDECIDED: 0, NOT_MET: 0}
    for r in rows:
        out[r.verdict] = out.get(r.verdict, 0) + 1
    return out


def blocking_rows(rows: Sequence[TheoremReport]) -> list[TheoremReport]:
    return [r for r in rows if r.verdict == FAILS
            or (r.verdict == UNDECIDED and r.theorem not in ALLOWED_UNDECIDED)]


def to_csv(rows: Sequence[TheoremReport]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r.row())
    return buf.getvalue()


def to_json(rows: Sequence[TheoremReport], meta: dict | None = None) -> str:
    cards: dict[str, list] = {}
    for r in rows:
        cards.setdefault(r.label, []).append(r.to_json())
    doc = {"meta": meta or {}, "summary": summarize(rows), "cards": cards}
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


__all__ = [
    "TheoremReport",
    "ALL_THEOREMS",
    "check_thm_1_1",
    "check_thm_1_2",
    "check_small_disc_fallback",
    "check_voutier_dobrowolski",
    "check_quadratic_and_friedman",
    "check_intermediate_chain",
    "check_prop_3_1",
    "check_poset",
    "check_extension",
    "amoroso_david_row",
    "silverman_constants_table",
    "unit_box_heights",
    "voutier_threshold",
    "run_corpus",
    "card_rows",
    "extension_rows",
    "summarize",
    "blocking_rows",
    "to_csv",
    "to_json",
]
