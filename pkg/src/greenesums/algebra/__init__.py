"""Exact arithmetic: rationals, sparse polynomials, difference-factored
rational functions, univariate specialization, residues and determinants."""
from fractions import Fraction

from .linalg import det
from .polynomial import Polynomial, poly_arith, poly_exact_div
from .ratfunc import ONE, ZERO, RationalFunction, rf_reduce, rf_specialize
from .univariate import (
    UnivariateRational,
    contour_sum,
    finite_poles,
    rational_roots,
    residue,
    upoly_eval,
    upoly_from_roots,
    upoly_mul,
)

Rational = Fraction

__all__ = [
    "Fraction", "Rational", "Polynomial", "poly_arith", "poly_exact_div",
    "RationalFunction", "rf_reduce", "rf_specialize", "ONE", "ZERO",
    "UnivariateRational", "residue", "contour_sum", "finite_poles",
    "rational_roots", "upoly_eval", "upoly_from_roots", "upoly_mul", "det",
]
