"""Exact polynomial, rational-function and quasi-polynomial arithmetic."""

from .bracket import BracketTable, jacobi_check, log_canonical_coefficient, poisson_bracket
from .interp import InterpolationError, interpolate_entries, interpolate_poly
from .poly import Poly, fmt_q, parse_poly
from .quasipoly import QuasiPoly
from .ratfunc import RatFunc

__all__ = [
    "BracketTable",
    "InterpolationError",
    "Poly",
    "QuasiPoly",
    "RatFunc",
    "fmt_q",
    "interpolate_entries",
    "interpolate_poly",
    "jacobi_check",
    "log_canonical_coefficient",
    "parse_poly",
    "poisson_bracket",
]
