"""Rational functions whose denominators are products of variable differences.

Every denominator met in Greene sums is a product of linear factors
(x_i - x_j), so a denominator is stored as a multiset of index pairs with
i < j. The overall sign lives in the numerator. Reduction is a sequence of
exact divisions of the numerator by those linear factors; no multivariate
gcd is ever needed.
"""
from __future__ import annotations

from collections import Counter
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple

from ..errors import PoleCollision, SubstitutionPole
from .polynomial import Polynomial, Scalar, default_name

Factor = Tuple[int, int]


class RationalFunction:
    """num / prod (x_hi - x_lo)^e, always stored reduced."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=1, den: Mapping[Factor, int] | Iterable[Factor] | None = None,
                 reduce: bool = True):
        if not isinstance(num, Polynomial):
            num = Polynomial.const(num)
        factors: Dict[Factor, int] = {}
        if den:
            items = den.items() if isinstance(den, Mapping) else ((f, 1) for f in den)
            for (a, b), e in items:
                if e == 0:
                    continue
                if e < 0:
                    raise ValueError("negative factor exponent")
                if a == b:
                    raise ZeroDivisionError(f"factor (x{a} - x{a}) is zero")
                if a > b:
                    a, b = b, a
                    if e % 2:
                        num = -num
                factors[(a, b)] = factors.get((a, b), 0) + e
        if num.is_zero():
            factors = {}
        self.num = num
        self.den = factors
        self._hash = None
        if reduce:
            self._reduce()

    @classmethod
    def _raw(cls, num, den):
        r = object.__new__(cls)
        r.num = num
        r.den = den
        r._hash = None
        return r

    def _reduce(self, only=None):
        if self.num.is_zero():
            self.den = {}
            return
        num = self.num
        den = self.den
        for f in list(only if only is not None else den):
            e = den.get(f, 0)
            while e and num.divides_linear(*f):
                num = num.div_linear(*f, check=False)
                e -= 1
            if e:
                den[f] = e
            else:
                den.pop(f, None)
        self.num = num

    @classmethod
    def inverse_differences(cls, pairs: Iterable[Factor]) -> "RationalFunction":
        """1 / prod (x_a - x_b) over the given ordered pairs."""
        return cls(1, Counter(pairs))

    @classmethod
    def difference(cls, a, b):
        return cls(Polynomial.diff(a, b))

    # -- inspection ----------------------------------------------------------

    def is_zero(self):
        return self.num.is_zero()

    def is_polynomial(self):
        return not self.den

    @property
    def sign(self):
        """Sign of the leading (graded-lex) numerator coefficient."""
        if self.num.is_zero():
            return 0
        return 1 if self.num.sorted_terms()[0][1] > 0 else -1

    def denominator_factors(self):
        return sorted((a, b, e) for (a, b), e in self.den.items())

    def denominator_poly(self) -> Polynomial:
        out = Polynomial.const(1)
        for (a, b), e in self.den.items():
            out = out * Polynomial.diff(a, b) ** e
        return out

    def variables(self):
        vs = set(self.num.variables())
        for a, b in self.den:
            vs.update((a, b))
        return vs

    # -- arithmetic ----------------------------------------------------------

    @staticmethod
    def _coerce(x):
        if isinstance(x, RationalFunction):
            return x
        if isinstance(x, (Polynomial, int, Fraction)):
            return RationalFunction(x)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        lcm = dict(self.den)
        for f, e in other.den.items():
            if e > lcm.get(f, 0):
                lcm[f] = e
        na = self.num
        for f, e in lcm.items():
            d = e - self.den.get(f, 0)
            if d:
                na = na * Polynomial.diff(*f) ** d
        nb = other.num
        for f, e in lcm.items():
            d = e - other.den.get(f, 0)
            if d:
                nb = nb * Polynomial.diff(*f) ** d
        r = RationalFunction._raw(na + nb, lcm)
        r._reduce()
        return r

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction._raw(-self.num, dict(self.den))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return RationalFunction._raw(Polynomial(), {})
            return RationalFunction._raw(self.num * other, dict(self.den))
        if isinstance(other, Polynomial):
            other = RationalFunction._raw(other, {})
        if not isinstance(other, RationalFunction):
            return NotImplemented
        num = self.num * other.num
        if num.is_zero():
            return RationalFunction._raw(num, {})
        den = dict(self.den)
        for f, e in other.den.items():
            den[f] = den.get(f, 0) + e
        r = RationalFunction._raw(num, den)
        # both operands reduced: only cross cancellations can occur
        if self.den and not other.num.is_constant():
            r._reduce(self.den)
        if other.den and not self.num.is_constant():
            r._reduce(other.den)
        return r

    __rmul__ = __mul__

    def __truediv__(self, other):
        """Division by scalars, or by a value whose numerator is constant."""
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.num.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        if not other.num.is_constant():
            raise ValueError("only difference-factored denominators are representable")
        inv = RationalFunction._raw(other.denominator_poly() * (1 / other.num.constant_value()), {})
        return self * inv

    def __pow__(self, e: int):
        if e < 0:
            if not self.num.is_constant():
                raise ValueError("negative power of a non-monomial numerator")
            c = self.num.constant_value()
            return RationalFunction(self.denominator_poly() ** (-e) * (1 / c ** (-e)))
        out = RationalFunction(1)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Polynomial)):
            other = RationalFunction(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, frozenset(self.den.items())))
        return self._hash

    # -- evaluation / substitution ----------------------------------------------

    def evaluate(self, values: Mapping[int, Scalar]) -> Fraction:
        d = Fraction(1)
        for (a, b), e in self.den.items():
            diff = Fraction(values[a]) - Fraction(values[b])
            if diff == 0:
                raise PoleCollision(f"x{a} and x{b} both take the value {values[a]}")
            d *= diff ** e
        return self.num.evaluate(values) / d

    def substitute_variable(self, v: int, w: int) -> "RationalFunction":
        """x_v -> x_w; SubstitutionPole if a factor (x_v - x_w) survives."""
        den: Dict[Factor, int] = {}
        num = self.num.rename(v, w)
        for (a, b), e in self.den.items():
            a2 = w if a == v else a
            b2 = w if b == v else b
            if a2 == b2:
                raise SubstitutionPole(f"factor (x{a} - x{b}) vanishes under x{v} -> x{w}")
            if a2 > b2:
                a2, b2 = b2, a2
                if e % 2:
                    num = -num
            den[(a2, b2)] = den.get((a2, b2), 0) + e
        return RationalFunction(num, den)

    def rename_variables(self, mapping: Mapping[int, int]) -> "RationalFunction":
        """Apply an injective variable renaming simultaneously."""
        num = self.num
        width = max(list(mapping) + list(mapping.values()) + list(self.variables()) + [0]) + 1
        # route through fresh variables to keep the renaming simultaneous
        for v in mapping:
            num = num.rename(v, v + width)
        for v, w in mapping.items():
            num = num.rename(v + width, w)
        den = {}
        for (a, b), e in self.den.items():
            den[(mapping.get(a, a), mapping.get(b, b))] = e
        return RationalFunction(num, den)

    def specialize(self, assign: Mapping[int, Scalar], keep: int):
        from .univariate import UnivariateRational, upoly_mul

        missing = self.variables() - set(assign) - {keep}
        if missing:
            raise ValueError(f"no value for variables {sorted(missing)}")
        num = self.num.subs({v: assign[v] for v in self.num.variables() if v != keep})
        num_coeffs = num.as_univariate(keep)
        den = [Fraction(1)]
        scale = Fraction(1)
        poles = []
        for (a, b), e in self.den.items():
            if a == keep or b == keep:
                other = b if a == keep else a
                c = Fraction(assign[other])
                # (z - c) or (c - z) = -(z - c)
                if b == keep and e % 2:
                    scale = -scale
                for _ in range(e):
                    den = upoly_mul(den, [-c, Fraction(1)])
                poles.append(c)
            else:
                d = Fraction(assign[a]) - Fraction(assign[b])
                if d == 0:
                    raise PoleCollision(f"x{a} and x{b} both take the value {assign[a]}")
                scale *= d ** e
        num_coeffs = [c / scale for c in num_coeffs]
        return UnivariateRational(keep, num_coeffs, den, poles=poles)

    # -- text ----------------------------------------------------------------

    def format(self, names=None) -> str:
        name = (lambda v: names[v]) if names is not None else default_name
        num = self.num.format(names)
        if not self.den:
            return num
        if len(self.num.terms) > 1:
            num = f"({num})"
        factors = []
        for a, b, e in self.denominator_factors():
            f = f"({name(a)} - {name(b)})"
            factors.append(f + (f"^{e}" if e > 1 else ""))
        if len(factors) == 1 and "^" not in factors[0]:
            return f"{num}/{factors[0]}"
        return f"{num}/({'*'.join(factors)})"

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"RationalFunction({self.format()!r})"


def rf_reduce(r: RationalFunction) -> RationalFunction:
    out = RationalFunction._raw(r.num, dict(r.den))
    out._reduce()
    return out


def rf_specialize(r: RationalFunction, assign, keep):
    return r.specialize(assign, keep)


ZERO = RationalFunction(0)
ONE = RationalFunction(1)
