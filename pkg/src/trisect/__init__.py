"""Alternating trilinear forms over finite fields and their singular lines."""

from .errors import (
    DivisionByZero,
    FieldMismatch,
    InternalInvariantViolation,
    InvalidParameter,
    Mismatch,
    NotASpread,
    SingularMatrix,
    TooLarge,
    TrisectError,
    WrongCharacteristic,
    WrongParity,
    ZeroVector,
)
from .forms import TriForm, catalog, contract, evaluate, format_form, parse_form, radical, transform
from .geometry import (
    LineSet,
    ProjLine,
    ProjPoint,
    SpreadReport,
    enum_points,
    is_normal_spread,
    min_coverage,
    singular_lines,
    spread_check,
    totally_singular_search,
)
from .gf import GF, FieldElem, FieldSpec, QuadExt, ext_pair, trace_abs, trace_rel
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "GF", "FieldElem", "FieldSpec", "QuadExt", "ext_pair", "trace_abs", "trace_rel",
    "TriForm", "catalog", "contract", "evaluate", "format_form", "parse_form", "radical", "transform",
    "LineSet", "ProjLine", "ProjPoint", "SpreadReport", "enum_points", "is_normal_spread", "min_coverage",
    "singular_lines", "spread_check", "totally_singular_search",
    "TrisectError", "DivisionByZero", "FieldMismatch", "InternalInvariantViolation", "InvalidParameter",
    "Mismatch", "NotASpread", "SingularMatrix", "TooLarge", "WrongCharacteristic", "WrongParity", "ZeroVector",
]
