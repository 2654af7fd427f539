"""Exact polynomial arithmetic, Gröbner bases, ideals and free-module primitives."""

from .ideal import Ideal, groebner, ideal_quotient, is_nzd_mod, krull_dimension, normal_form, reduce
from .module import FreeVector, Submodule, combine, module_lift, syzygy_basis
from .poly import Monomial, Poly, PolyParseError, RingCtx, format_poly, parse_poly

__all__ = [
    "FreeVector",
    "Ideal",
    "Monomial",
    "Poly",
    "PolyParseError",
    "RingCtx",
    "Submodule",
    "combine",
    "format_poly",
    "groebner",
    "ideal_quotient",
    "is_nzd_mod",
    "krull_dimension",
    "module_lift",
    "normal_form",
    "parse_poly",
    "reduce",
    "syzygy_basis",
]
