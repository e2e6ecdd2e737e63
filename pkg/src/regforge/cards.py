"""Field cards: JSON schema 1, loading with validation, and quadratic bootstrap.

Integers are decimal strings and rationals are "p/q" strings, so nothing
passes through a float.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from pathlib import Path
from typing import Any

from .field import FieldDataError, FieldElement, NumberField
from .poly import poly_from_ints
from .relative import Extension
from .towers import SubfieldPoset
from .units import SingularUnitsError, UnitSystem

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
REQUIRED = ("schema", "label", "min_poly", "integral_basis", "discriminant", "signature",
            "fundamental_units", "torsion_order")


class CardError(ValueError):
    """A card failed schema checks or validation; carries the label and field path."""

    def __init__(self, label: str, path: str, message: str):
        super().__init__(f"{label}: {path}: {message}")
        self.label = label
        self.path = path
        self.message = message


# -- encoding -----------------------------------------------------------------------


def enc(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def dec(s: Any, label: str = "?", path: str = "?") -> Fraction:
    if not isinstance(s, str):
        raise CardError(label, path, f"expected a decimal string, got {type(s).__name__}")
    try:
        return Fraction(s.strip())
    except (ValueError, ZeroDivisionError):
        raise CardError(label, path, f"malformed number {s!r}") from None


def dec_int(s: Any, label: str = "?", path: str = "?") -> int:
    v = dec(s, label, path)
    if v.denominator != 1:
        raise CardError(label, path, f"expected an integer, got {s!r}")
    return int(v)


def element_to_json(a: FieldElement) -> list[str]:
    return [enc(c) for c in a.coords]


# -- card model ------------------------------------------------------------------------


@dataclass
class FieldCard:
    label: str
    field: NumberField
    units: UnitSystem
    subfields: list[tuple[str, list[Fraction]]] = field(default_factory=list)
    extensions: list[tuple[str, list[Fraction]]] = field(default_factory=list)
    raw: dict = field(default_factory=dict, repr=False)

    @property
    def degree(self) -> int:
        return self.field.degree


def _check_schema(raw: dict, label: str) -> None:
    for key in REQUIRED:
        if key not in raw:
            raise CardError(label, key, "missing required field")
    if raw["schema"] != SCHEMA_VERSION:
        raise CardError(label, "schema", f"unsupported schema {raw['schema']!r}")
    if not isinstance(raw["label"], str) or not raw["label"]:
        raise CardError(label, "label", "label must be a nonempty string")
    for key in ("min_poly", "integral_basis", "fundamental_units", "signature"):
        if not isinstance(raw[key], list):
            raise CardError(label, key, "must be a list")


def parse_card(raw: dict, precision: int = 128) -> FieldCard:
    """Build and fully validate one card."""
    label = raw.get("label", "?") if isinstance(raw, dict) else "?"
    if not isinstance(raw, dict):
        raise CardError(label, "$", "card must be a JSON object")
    _check_schema(raw, label)
    coeffs = [dec_int(c, label, f"min_poly[{i}]") for i, c in enumerate(raw["min_poly"])]
    d = len(coeffs) - 1
    basis = [[dec(c, label, f"integral_basis[{i}][{j}]") for j, c in enumerate(w)]
             for i, w in enumerate(raw["integral_basis"])]
    disc = dec_int(raw["discriminant"], label, "discriminant")
    sig = raw["signature"]
    if len(sig) != 2:
        raise CardError(label, "signature", "signature must be [r1, r2]")
    sig = (dec_int(str(sig[0]), label, "signature[0]"), dec_int(str(sig[1]), label, "signature[1]"))
    try:
        k = NumberField(poly_from_ints(coeffs), basis, disc, sig, label)
        k.validate()
    except FieldDataError as e:
        raise CardError(label, "field", str(e)) from None
    if sig[0] + 2 * sig[1] != d:
        raise CardError(label, "signature", f"r1 + 2 r2 != {d}")
    units = []
    for i, u in enumerate(raw["fundamental_units"]):
        if len(u) != d:
            raise CardError(label, f"fundamental_units[{i}]", f"expected {d} coordinates")
        units.append(k.element([dec(c, label, f"fundamental_units[{i}][{j}]") for j, c in enumerate(u)]))
    t = dec_int(str(raw["torsion_order"]), label, "torsion_order")
    us = UnitSystem(k, units, t)
    try:
        us.validate(precision)
    except (FieldDataError, SingularUnitsError) as e:
        raise CardError(label, "fundamental_units", str(e)) from None
    subs = []
    for i, s in enumerate(raw.get("subfields", [])):
        try:
            subs.append((s["label"], [dec(c, label, f"subfields[{i}].embedding") for c in s["embedding"]]))
        except (KeyError, TypeError):
            raise CardError(label, f"subfields[{i}]", "needs label and embedding") from None
    exts = []
    for i, s in enumerate(raw.get("extensions", [])):
        try:
            exts.append((s["top"], [dec(c, label, f"extensions[{i}].embedding") for c in s["embedding"]]))
        except (KeyError, TypeError):
            raise CardError(label, f"extensions[{i}]", "needs top and embedding") from None
    return FieldCard(label, k, us, subs, exts, raw)


def card_to_json(card_or_field, units=(), torsion_order: int = 2, subfields=(), extensions=()) -> dict:
    """Serialize a field (or a FieldCard) as a schema-1 dict."""
    if isinstance(card_or_field, FieldCard):
        return dict(card_or_field.raw)
    k: NumberField = card_or_field
    return {
        "schema": SCHEMA_VERSION,
        "label": k.label,
        "min_poly": [enc(c) for c in k.min_poly.coeffs],
        "integral_basis": [element_to_json(w) for w in k.integral_basis],
        "discriminant": enc(k.discriminant),
        "signature": [str(x) for x in k.signature],
        "fundamental_units": [element_to_json(u) for u in units],
        "torsion_order": str(torsion_order),
        "subfields": [{"label": l, "embedding": element_to_json(e)} for l, e in subfields],
        "extensions": [{"top": l, "embedding": element_to_json(e)} for l, e in extensions],
    }


# -- corpus ------------------------------------------------------------------------------


@dataclass
class ExtensionData:
    ext: Extension
    base: FieldCard
    top: FieldCard

    @property
    def label(self) -> str:
        return self.ext.label


@dataclass
class Corpus:
    cards: dict[str, FieldCard] = field(default_factory=dict)
    posets: dict[str, SubfieldPoset] = field(default_factory=dict)
    extensions: list[ExtensionData] = field(default_factory=list)
    errors: list[CardError] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.cards)

    def labels(self) -> list[str]:
        return sorted(self.cards)

    def digest(self) -> str:
        """Hash of the validated state; independent of file order."""
        blob = json.dumps([_canonical(self.cards[l].raw) for l in self.labels()], sort_keys=True)
        blob += json.dumps(sorted(e.label for e in self.extensions))
        return hashlib.sha256(blob.encode()).hexdigest()

    def extension(self, label: str) -> ExtensionData:
        for e in self.extensions:
            if e.label == label:
                return e
        raise KeyError(f"no extension {label!r}")


def _canonical(raw: dict) -> dict:
    out = dict(raw)
    out["subfields"] = sorted(raw.get("subfields", []), key=lambda s: s["label"])
    out["extensions"] = sorted(raw.get("extensions", []), key=lambda s: s["top"])
    return out


def _card_files(path: Path) -> list[Path]:
    if path.is_file():
        return [path]
    if not path.exists():
        raise FileNotFoundError(f"no such corpus path: {path}")
    return sorted(path.glob("*.json"))


def load_card(path: str | Path) -> FieldCard:
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise CardError(path.stem, "$", f"invalid JSON: {e}") from None
    return parse_card(raw)


def load_corpus(path: str | Path, strict: bool = False) -> Corpus:
    """Load every card under ``path``, then resolve subfields and extensions.

    Rejected cards are collected in ``corpus.errors`` (or raised with ``strict``).
    """
    corpus = Corpus()
    for f in _card_files(Path(path)):
        try:
            card = load_card(f)
            if card.label in corpus.cards:
                raise CardError(card.label, "label", f"duplicate label (also in another file than {f.name})")
            corpus.cards[card.label] = card
        except CardError as e:
            if strict:
                raise
            logger.warning("%s", e)
            corpus.errors.append(e)
    for label in corpus.labels():
        card = corpus.cards[label]
        try:
            corpus.posets[label] = _build_poset(card, corpus)
        except (CardError, FieldDataError) as e:
            err = e if isinstance(e, CardError) else CardError(label, "subfields", str(e))
            if strict:
                raise err
            corpus.errors.append(err)
        for i, (top, emb) in enumerate(card.extensions):
            try:
                if top not in corpus.cards:
                    raise CardError(label, f"extensions[{i}].top", f"dangling reference {top!r}")
                tcard = corpus.cards[top]
                if len(emb) != tcard.degree:
                    raise CardError(label, f"extensions[{i}].embedding", "wrong length")
                ext = Extension(card.field, tcard.field, tcard.field.element(emb), f"{top}/{label}")
                corpus.extensions.append(ExtensionData(ext, card, tcard))
            except (CardError, FieldDataError) as e:
                err = e if isinstance(e, CardError) else CardError(label, f"extensions[{i}]", str(e))
                if strict:
                    raise err
                corpus.errors.append(err)
    corpus.extensions.sort(key=lambda e: e.label)
    return corpus


def _build_poset(card: FieldCard, corpus: Corpus) -> SubfieldPoset:
    subs = []
    for i, (lab, emb) in enumerate(card.subfields):
        if lab not in corpus.cards:
            raise CardError(card.label, f"subfields[{i}].label", f"dangling reference {lab!r}")
        if len(emb) != card.degree:
            raise CardError(card.label, f"subfields[{i}].embedding", "wrong length")
        sub = corpus.cards[lab]
        subs.append((lab, sub.field, card.field.element(emb)))
    return SubfieldPoset.from_subfields(card.field, subs, card.label)


# -- quadratic bootstrap ------------------------------------------------------------------


def squarefree_part(n: int) -> int:
    sign = -1 if n < 0 else 1
    n = abs(n)
    out = 1
    p = 2
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
        if n % p == 0:
            out *= p
            n //= p
        p += 1
    return sign * out * n


def quadratic_field(n: int) -> NumberField:
    """Q(sqrt n) with its maximal order; ``n`` is reduced to its squarefree part."""
    m = squarefree_part(n)
    if m == 1 or m == 0:
        raise ValueError(f"Q(sqrt {n}) is not a quadratic field")
    if m % 4 == 1:
        basis = [[1, 0], [Fraction(1, 2), Fraction(1, 2)]]
        disc = m
    else:
        basis = [[1, 0], [0, 1]]
        disc = 4 * m
    sig = (2, 0) if m > 0 else (0, 1)
    k = NumberField(poly_from_ints([-m, 0, 1]), basis, disc, sig, f"Q(sqrt{m})")
    k.validate()
    return k


def fundamental_unit_cf(m: int) -> tuple[int, int, int]:
    """(x, y, den): the fundamental unit (x + y sqrt m)/den of Q(sqrt m), m > 1
    squarefree, from the continued fraction of w = sqrt m or (1 + sqrt m)/2."""
    if m <= 1:
        raise ValueError("need a squarefree m > 1")
    s = isqrt(m)
    if m % 4 == 1:
        # w = (1 + sqrt m)/2 = (P + sqrt m)/Q with P = 1, Q = 2
        P, Qd = 1, 2
    else:
        P, Qd = 0, 1
    p0, p1 = 1, (P + s) // Qd
    q0, q1 = 0, 1
    a = p1
    while True:
        # norm of p - q w' (w' the conjugate) for the current convergent p/q of w
        if m % 4 == 1:
            # p - q(1 - sqrt m)/2 = (2p - q + q sqrt m)/2
            x, y = 2 * p1 - q1, q1
            nm = (x * x - m * y * y) // 4
            if abs(nm) == 1:
                return x, y, 2
        else:
            nm = p1 * p1 - m * q1 * q1
            if abs(nm) == 1:
                return p1, q1, 1
        P = a * Qd - P
        Qd = (m - P * P) // Qd
        a = (P + s) // Qd
        p0, p1 = p1, a * p1 + p0
        q0, q1 = q1, a * q1 + q0


def bootstrap_quadratic(n: int) -> dict:
    """A validated schema-1 card for the real quadratic field Q(sqrt n)."""
    k = quadratic_field(n)
    m = squarefree_part(n)
    if m < 0:
        raise ValueError("bootstrap only covers real quadratic fields")
    x, y, den = fundamental_unit_cf(m)
    u = k.element([Fraction(x, den), Fraction(y, den)])
    card = card_to_json(k, [u], 2)
    parse_card(card)
    return card


def write_card(card: dict, directory: str | Path) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    name = "".join(ch if ch.isalnum() or ch in "-_." else "_" for ch in card["label"]).strip("_")
    path = directory / f"{name}.json"
    path.write_text(json.dumps(card, indent=1, sort_keys=True) + "\n")
    return path


__all__ = [
    "SCHEMA_VERSION",
    "CardError",
    "FieldCard",
    "Corpus",
    "ExtensionData",
    "parse_card",
    "card_to_json",
    "load_card",
    "load_corpus",
    "squarefree_part",
    "quadratic_field",
    "fundamental_unit_cf",
    "bootstrap_quadratic",
    "write_card",
    "enc",
    "dec",
]
