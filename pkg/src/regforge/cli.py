"""Command-line entry point: ``regforge <subcommand> ...``.

Exit codes: 0 success, 1 undecided checks outside the allowed list,
2 certified failure, 3 card/schema errors, 64 usage errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from mpmath import mp

from . import __version__
from .balls import HOLDS, RealBall, working_precision
from .cards import CardError, Corpus, FieldCard, bootstrap_quadratic, load_card, load_corpus, write_card
from .field import format_element, parse_element

EXIT_OK, EXIT_UNDECIDED, EXIT_FAIL, EXIT_SCHEMA, EXIT_USAGE = 0, 1, 2, 3, 64

log = logging.getLogger("regforge")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def fmt_ball(b: RealBall, digits: int = 8) -> str:
    """Outward-rounded decimal enclosure with ``digits`` significant digits."""

    def side(x, up: bool) -> str:
        if x == 0:
            return "0"
        e = int(mp.floor(mp.log10(abs(x))))
        k = digits - 1 - e
        scaled = x * mp.mpf(10) ** k
        n = int(mp.ceil(scaled) if up else mp.floor(scaled))
        if k <= 0:
            return str(n * 10 ** (-k))
        sign = "-" if n < 0 else ""
        s = str(abs(n)).rjust(k + 1, "0")
        return f"{sign}{s[:-k]}.{s[-k:]}"

    with working_precision(max(mp.prec, 128)):
        return f"[{side(b.lo, False)}, {side(b.hi, True)}]"


# -- resolution of card / extension arguments -------------------------------------------------------


def _corpus(path: str) -> Corpus:
    p = Path(path)
    if not p.exists():
        raise UsageError(f"no such corpus: {path}")
    return load_corpus(p)


def resolve_card(arg: str, corpus_path: str) -> tuple[FieldCard, Corpus | None]:
    """A card file path, or a label looked up in the corpus.

    The corpus (the card file's directory for paths) is returned for
    commands that need subfield data."""
    p = Path(arg)
    if p.is_file():
        card = load_card(p)
        try:
            corpus = load_corpus(p.parent)
        except FileNotFoundError:
            corpus = None
        if corpus is not None and corpus.cards.get(card.label) is None:
            corpus = None
        return card, corpus
    corpus = _corpus(corpus_path)
    if arg not in corpus.cards:
        raise UsageError(f"unknown card {arg!r}")
    return corpus.cards[arg], corpus


def resolve_extension(arg: str, corpus_path: str):
    corpus = _corpus(corpus_path)
    try:
        return corpus.extension(arg)
    except KeyError:
        known = ", ".join(e.label for e in corpus.extensions) or "none"
        raise UsageError(f"unknown extension {arg!r} (known: {known})") from None


# -- subcommands ------------------------------------------------------------------------------------


def cmd_validate(args) -> int:
    try:
        corpus = load_corpus(args.corpus)
    except FileNotFoundError as e:
        raise UsageError(str(e)) from None
    for e in corpus.errors:
        print(f"ERROR {e}")
    ok = len(corpus.cards) - len({e.label for e in corpus.errors if e.label in corpus.cards})
    print(f"{ok} cards OK, {len(corpus.extensions)} extensions, {len(corpus.errors)} errors")
    print(f"digest {corpus.digest()}")
    return EXIT_SCHEMA if corpus.errors else EXIT_OK


def cmd_height(args) -> int:
    from .heights import weil_height

    card, _ = resolve_card(args.card, args.corpus)
    try:
        a = parse_element(card.field, args.expr, args.var)
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(f"bad element expression: {e}") from None
    h = weil_height(a, args.precision)
    with working_precision(args.precision):
        hd = h * card.degree
    print(f"element {format_element(a, args.var)}")
    print(f"h       {fmt_ball(h, args.digits)}")
    print(f"[k:Q]h  {fmt_ball(hd, args.digits)}")
    return EXIT_OK


def cmd_regulator(args) -> int:
    from .units import regulator

    card, _ = resolve_card(args.card, args.corpus)
    print(fmt_ball(regulator(card.field, card.units, args.precision), args.digits))
    return EXIT_OK


def _print_minima(res, digits: int) -> int:
    for lam, v in zip(res.minima, res.vectors):
        print(f"lambda {fmt_ball(lam, digits)}  exponents {list(v)}")
    mk = res.minkowski_check()
    print(f"minima {res.state}; Minkowski {mk.state}")
    return EXIT_OK if res.state == HOLDS and mk.state == HOLDS else EXIT_UNDECIDED


def cmd_minima(args) -> int:
    from .minima import successive_minima
    from .norms import DELTA, NABLA, NormTag
    from .relative import place_partition, relative_unit_kernel, subgroup_lattice
    from .units import unit_lattice

    p = Path(args.target)
    corpus = None if p.is_file() else _corpus(args.corpus)
    if corpus is not None and args.target not in corpus.cards:
        ed = resolve_extension(args.target, args.corpus)
        basis = relative_unit_kernel(ed.ext, ed.top.units, ed.base.units, args.precision)
        if basis.rank == 0:
            raise UsageError("relative unit rank is zero")
        part = place_partition(ed.ext, "smallest", args.precision)
        n = basis.rank
        lat = subgroup_lattice(basis, part, [[int(i == j) for j in range(n)] for i in range(n)], args.precision)
        tag = NormTag(NABLA, part.nonempty_blocks()) if args.norm == "nabla" else NormTag(DELTA)
        return _print_minima(successive_minima(lat, tag), args.digits)
    card, _ = resolve_card(args.target, args.corpus)
    if args.norm == "nabla":
        raise UsageError("--norm nabla needs an extension (the partition comes from l/k)")
    if card.field.unit_rank == 0:
        raise UsageError("unit rank is zero")
    lat = unit_lattice(card.field, card.units, args.precision)
    return _print_minima(successive_minima(lat, NormTag(DELTA)), args.digits)


def cmd_relative(args) -> int:
    from .relative import place_partition, relative_regulator, relative_unit_kernel, short_relative_units

    ed = resolve_extension(args.extension, args.corpus)
    basis = relative_unit_kernel(ed.ext, ed.top.units, ed.base.units, args.precision)
    var = args.var
    if args.action == "kernel":
        print(f"relative rank {basis.rank}; [F_k : N(F_l)] = {basis.norm_image_index}")
        for row, e in zip(basis.exponent_matrix, basis.elements):
            print(f"{row}  {format_element(e, var)}")
        return EXIT_OK
    if basis.rank == 0:
        raise UsageError("relative unit rank is zero")
    part = place_partition(ed.ext, "smallest", args.precision)
    if args.action == "regulator":
        print(fmt_ball(relative_regulator(basis, part, args.precision), args.digits))
        return EXIT_OK
    s = short_relative_units(basis, part, None, args.precision, ed.base.units.torsion_order)
    for u, h in zip(s.units, s.heights):
        print(f"[l:Q]h {fmt_ball(h, args.digits)}  {format_element(u, var)}")
    print(f"product bound {s.bound.state}: {fmt_ball(s.bound.lhs, args.digits)} <= {fmt_ball(s.bound.rhs, args.digits)}")
    v = s.verdict
    print(f"overall {v}")
    return {HOLDS: EXIT_OK, "fails": EXIT_FAIL}.get(v, EXIT_UNDECIDED)


def cmd_tower(args) -> int:
    from .towers import aleph, lambda_, maximal_star_field, rho_and_cm, verify_star_field

    card, corpus = resolve_card(args.card, args.corpus)
    if corpus is None or card.label not in corpus.posets:
        raise UsageError("tower data needs the card's subfield cards in the same corpus")
    poset = corpus.posets[card.label]
    labels = sorted(poset.nodes, key=lambda l: (poset.nodes[l].degree, l))
    if args.action == "lambda":
        for l in labels:
            print(f"{l}\t{lambda_(poset, l)}")
    elif args.action == "aleph":
        for l in labels:
            a = aleph(poset, l)
            print(f"{l}\t{a.value}")
    elif args.action == "kstar":
        ks = maximal_star_field(poset)
        v = verify_star_field(poset, ks)
        print(f"k* = {ks} ({v.state})")
        return EXIT_OK if v.state == HOLDS else EXIT_FAIL
    else:
        rho, cm = rho_and_cm(poset)
        print(f"rho = {rho}; r = {card.field.unit_rank}; CM = {'yes' if cm else 'no'}")
    return EXIT_OK


def _theorem_list(text: str | None):
    from .checkers import ALL_THEOREMS

    if not text or text == "all":
        return ALL_THEOREMS
    items = [t.strip() for t in text.split(",") if t.strip()]
    bad = [t for t in items if t not in ALL_THEOREMS]
    if bad:
        raise UsageError(f"unknown theorem ids {bad}; choose from {', '.join(ALL_THEOREMS)}")
    return items


def _run(args, theorems):
    from .checkers import run_corpus

    corpus = load_corpus(args.corpus)
    rows = run_corpus(corpus, theorems, args.seed, args.precision, workers=args.workers, path=args.corpus)
    return corpus, rows


def _exit_for(corpus: Corpus, rows) -> int:
    from .checkers import blocking_rows

    block = blocking_rows(rows)
    if any(r.verdict == "fails" for r in block):
        return EXIT_FAIL
    if corpus.errors:
        return EXIT_SCHEMA
    return EXIT_UNDECIDED if block else EXIT_OK


def cmd_verify(args) -> int:
    from .checkers import blocking_rows, summarize

    theorems = _theorem_list(args.theorems)
    corpus, rows = _run(args, theorems)
    for e in corpus.errors:
        print(f"ERROR {e}")
    s = summarize(rows)
    print(f"{len(corpus.cards)} cards, {len(corpus.extensions)} extensions, {len(rows)} checks: "
          + ", ".join(f"{k} {v}" for k, v in s.items()))
    for r in blocking_rows(rows):
        print(f"{r.verdict.upper()} {r.label} {r.theorem}: {r.note}")
    return _exit_for(corpus, rows)


def cmd_report(args) -> int:
    from .checkers import summarize, to_csv, to_json

    theorems = _theorem_list(args.theorems)
    corpus, rows = _run(args, theorems)
    if args.format == "csv":
        text = to_csv(rows)
    else:
        meta = {"seed": args.seed, "precision": args.precision, "corpus_digest": corpus.digest(),
                "theorems": list(theorems), "version": __version__}
        text = to_json(rows, meta)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(text)
        print(f"wrote {len(rows)} rows to {args.out}; " + ", ".join(f"{k} {v}" for k, v in summarize(rows).items()),
              file=sys.stderr)
    return _exit_for(corpus, rows)


def cmd_bootstrap(args) -> int:
    try:
        card = bootstrap_quadratic(args.n)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if args.out:
        print(write_card(card, args.out))
    else:
        print(json.dumps(card, indent=1, sort_keys=True))
    return EXIT_OK


# -- parser --------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=128, help="starting precision in bits")
    common.add_argument("--precision-cap", type=int, default=None,
                        help="escalation cap in bits (overrides REG_FORGE_PRECISION_CAP)")
    common.add_argument("--corpus", default="corpus", help="corpus used to resolve labels")
    common.add_argument("--digits", type=int, default=8, help="significant digits when printing balls")
    common.add_argument("--var", default="a", help="generator name in element expressions")
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="regforge", description="Certified heights, regulators and unit bounds over field cards.")
    p.add_argument("--version", action="version", version=f"regforge {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    s = sub.add_parser("validate", parents=[common], help="load and validate a corpus")
    s.add_argument("corpus")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("height", parents=[common], help="Weil height of an element")
    s.add_argument("card")
    s.add_argument("expr", help='polynomial in the generator, e.g. "1+1*a"')
    s.set_defaults(func=cmd_height)

    s = sub.add_parser("regulator", parents=[common], help="certified regulator ball")
    s.add_argument("card")
    s.set_defaults(func=cmd_regulator)

    s = sub.add_parser("minima", parents=[common], help="successive minima of a unit lattice")
    s.add_argument("target", help="card file or label, or an extension label top/base")
    s.add_argument("--norm", choices=("delta", "nabla"), default="delta")
    s.set_defaults(func=cmd_minima)

    s = sub.add_parser("relative", parents=[common], help="relative units of an extension")
    s.add_argument("extension", help="extension label top/base")
    s.add_argument("action", choices=("kernel", "regulator", "short-units"))
    s.set_defaults(func=cmd_relative)

    s = sub.add_parser("tower", parents=[common], help="subfield tower functions")
    s.add_argument("card")
    s.add_argument("action", choices=("lambda", "aleph", "kstar", "rho"))
    s.set_defaults(func=cmd_tower)

    run = argparse.ArgumentParser(add_help=False)
    run.add_argument("--theorems", default="all", help="comma-separated check ids, or 'all'")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--workers", type=int, default=1, help="worker processes (one task per card)")

    s = sub.add_parser("verify", parents=[common, run], help="run checks and print a summary")
    s.add_argument("corpus")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("report", parents=[common, run], help="write a CSV or JSON report")
    s.add_argument("corpus")
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_report)

    s = sub.add_parser("bootstrap-quadratic", parents=[common], help="card for Q(sqrt N) from continued fractions")
    s.add_argument("n", type=int)
    s.add_argument("--out", default=None, help="directory to write the card into")
    s.set_defaults(func=cmd_bootstrap)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if args.precision_cap is not None:
        if args.precision_cap < 64:
            parser.error("--precision-cap must be at least 64")
        os.environ["REG_FORGE_PRECISION_CAP"] = str(args.precision_cap)
    if args.precision < 53:
        parser.error("--precision must be at least 53")
    try:
        return args.func(args)
    except UsageError as e:
        print(f"regforge: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except CardError as e:
        print(f"ERROR {e}", file=sys.stderr)
        return EXIT_SCHEMA
    except ArithmeticError as e:
        print(f"regforge: undecided: {e}", file=sys.stderr)
        return EXIT_UNDECIDED


if __name__ == "__main__":
    sys.exit(main())
