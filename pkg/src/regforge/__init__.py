"""regforge: certified heights, regulators and relative unit bounds for number fields.

Exact arithmetic is done with :class:`fractions.Fraction`; every real quantity
is an mpmath interval ball, and comparisons return a three-valued
:class:`~regforge.balls.Verdict`.
"""

__version__ = "0.1.0"

from .balls import FAILS, HOLDS, NOT_MET, UNDECIDED, ComplexBall, RealBall, Verdict
from .cards import Corpus, FieldCard, bootstrap_quadratic, load_card, load_corpus, parse_card
from .embeddings import log_vector, places
from .field import FieldElement, NumberField, format_element, parse_element
from .heights import arakelov_height, discriminant_identity_check, f_k, weil_height
from .kernels import BACKEND
from .minima import LogLattice, successive_minima
from .norms import nabla, schinzel_delta
from .relative import (
    Extension,
    place_partition,
    relative_norm,
    relative_regulator,
    relative_unit_kernel,
    short_relative_units,
)
from .towers import SubfieldPoset, aleph, lambda_, maximal_star_field, rho_and_cm
from .units import UnitSystem, regulator, small_units

__all__ = [
    "__version__",
    "BACKEND",
    "RealBall",
    "ComplexBall",
    "Verdict",
    "HOLDS",
    "FAILS",
    "UNDECIDED",
    "NOT_MET",
    "NumberField",
    "FieldElement",
    "format_element",
    "parse_element",
    "places",
    "log_vector",
    "weil_height",
    "arakelov_height",
    "f_k",
    "discriminant_identity_check",
    "schinzel_delta",
    "nabla",
    "LogLattice",
    "successive_minima",
    "UnitSystem",
    "regulator",
    "small_units",
    "Extension",
    "relative_norm",
    "place_partition",
    "relative_unit_kernel",
    "relative_regulator",
    "short_relative_units",
    "SubfieldPoset",
    "lambda_",
    "aleph",
    "maximal_star_field",
    "rho_and_cm",
    "FieldCard",
    "Corpus",
    "parse_card",
    "load_card",
    "load_corpus",
    "bootstrap_quadratic",
]
