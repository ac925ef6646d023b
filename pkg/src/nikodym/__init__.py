"""Exact finite-field toolkit for Nikodym/Kakeya sets, algebraic spreadness
certificates, and dimension-counting bound reports."""

from .field import FieldCtx, FieldElem, embed, field_from_order, make_field, parse_field_spec
from .intervals import RatInterval, nth_root
from .poly import (INFINITY, AffineMap, Flat, Line, MultiPoly, apply_affine,
                   format_poly, hasse, mult_at, mult_on_line, parse_poly, restrict)

__version__ = "0.1.0"

__all__ = [
    "AffineMap", "FieldCtx", "FieldElem", "Flat", "INFINITY", "Line",
    "MultiPoly", "RatInterval", "apply_affine", "embed", "field_from_order",
    "format_poly", "hasse", "make_field", "mult_at", "mult_on_line",
    "nth_root", "parse_field_spec", "parse_poly", "restrict",
]
