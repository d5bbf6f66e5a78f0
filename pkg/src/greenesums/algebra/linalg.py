"""Exact determinants."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .polynomial import Polynomial
from .ratfunc import RationalFunction


def _det_field(m):
    a = [[Fraction(x) for x in row] for row in m]
    n = len(a)
    sign = 1
    det = Fraction(1)
    for k in range(n):
        piv = next((r for r in range(k, n) if a[r][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        p = a[k][k]
        det *= p
        for r in range(k + 1, n):
            f = a[r][k] / p
            if f:
                row_k = a[k]
                row_r = a[r]
                for c in range(k + 1, n):
                    row_r[c] -= f * row_k[c]
    return det * sign


def _det_bareiss(m):
    """Fraction-free elimination; every division is exact."""
    a = [[x if isinstance(x, Polynomial) else Polynomial.const(x) for x in row] for row in m]
    n = len(a)
    sign = 1
    prev = Polynomial.const(1)
    for k in range(n - 1):
        if a[k][k].is_zero():
            piv = next((r for r in range(k + 1, n) if not a[r][k].is_zero()), None)
            if piv is None:
                return Polynomial()
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]).exact_div(prev)
        prev = a[k][k]
    out = a[n - 1][n - 1]
    return -out if sign < 0 else out


def _det_minors(m):
    """Expansion by minors along columns, memoized on row subsets (O(n 2^n))."""
    n = len(m)
    memo = {}

    def rec(col, rows):
        if col == n:
            return 1
        key = rows
        if key in memo:
            return memo[key]
        total = 0
        sign = 1
        for r in range(n):
            if rows >> r & 1:
                entry = m[r][col]
                if not _is_zero(entry):
                    sub = rec(col + 1, rows & ~(1 << r))
                    term = entry * sub
                    total = total + term if sign > 0 else total - term
                sign = -sign
        memo[key] = total
        return total

    return rec(0, (1 << n) - 1)


def _is_zero(x):
    if isinstance(x, (Polynomial, RationalFunction)):
        return x.is_zero()
    return x == 0


def det(m: Sequence[Sequence]):
    """Determinant of a square matrix of rationals, polynomials or rational functions."""
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("matrix is not square")
    if n == 0:
        return Fraction(1)
    flat = [x for row in m for x in row]
    if all(isinstance(x, (int, Fraction)) for x in flat):
        return _det_field(m)
    if all(isinstance(x, (int, Fraction, Polynomial)) for x in flat):
        return _det_bareiss(m)
    out = _det_minors(m)
    return out if isinstance(out, RationalFunction) else RationalFunction(out)
