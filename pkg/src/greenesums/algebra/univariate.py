"""Univariate rational functions over Q, residues and contour sums.

Dense coefficient lists run from the constant term upward.
"""
from __future__ import annotations

from fractions import Fraction
from math import comb, gcd, isqrt
from typing import Iterable, List, Sequence

from ..errors import ImproperIntegrand, IrrationalPole

UPoly = List[Fraction]


def upoly_trim(p: Sequence) -> UPoly:
    p = [Fraction(c) for c in p]
    while p and p[-1] == 0:
        p.pop()
    return p


def upoly_add(a, b):
    n = max(len(a), len(b))
    return upoly_trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def upoly_scale(a, c):
    return upoly_trim([x * c for x in a])


def upoly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return upoly_trim(out)


def upoly_divmod(a, b):
    a = upoly_trim(a)
    b = upoly_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return [], a
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    r = list(a)
    lead = b[-1]
    for k in range(len(a) - len(b), -1, -1):
        c = r[k + len(b) - 1] / lead
        q[k] = c
        if c:
            for j, y in enumerate(b):
                r[k + j] -= c * y
    return upoly_trim(q), upoly_trim(r[: len(b) - 1])


def upoly_gcd(a, b):
    a = upoly_trim(a)
    b = upoly_trim(b)
    while b:
        a, b = b, upoly_divmod(a, b)[1]
    if not a:
        return []
    return upoly_scale(a, 1 / a[-1])


def upoly_eval(a, x):
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


def upoly_shift(a, p):
    """Coefficients of a(p + w) as a polynomial in w."""
    out = [Fraction(0)] * len(a)
    for k, c in enumerate(a):
        if c:
            pk = Fraction(1)
            # c * (p + w)^k = c * sum_j C(k, j) p^(k-j) w^j
            for j in range(k, -1, -1):
                out[j] += c * comb(k, j) * pk
                pk *= p
    return upoly_trim(out)


def upoly_degree(a):
    return len(upoly_trim(a)) - 1


def upoly_from_roots(roots: Iterable) -> UPoly:
    out = [Fraction(1)]
    for r in roots:
        out = upoly_mul(out, [-Fraction(r), Fraction(1)])
    return out


class UnivariateRational:
    """num(z) / den(z) in lowest terms with monic denominator.

    ``poles`` is an optional list of candidate rational roots of the
    denominator, recorded when the value comes from a specialization.
    """

    __slots__ = ("variable", "num", "den", "poles")

    def __init__(self, variable: int, num: Sequence, den: Sequence = (1,), poles=()):
        num = upoly_trim(num)
        den = upoly_trim(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if num:
            g = upoly_gcd(num, den)
            if len(g) > 1:
                num = upoly_divmod(num, g)[0]
                den = upoly_divmod(den, g)[0]
        else:
            den = [Fraction(1)]
        lead = den[-1]
        self.variable = variable
        self.num = upoly_scale(num, 1 / lead)
        self.den = upoly_scale(den, 1 / lead)
        self.poles = tuple(dict.fromkeys(Fraction(p) for p in poles))

    @classmethod
    def polynomial(cls, variable, coeffs):
        return cls(variable, coeffs, [1])

    def _wrap(self, other):
        if isinstance(other, UnivariateRational):
            if other.variable != self.variable:
                raise ValueError("mismatched variables")
            return other
        if isinstance(other, (int, Fraction)):
            return UnivariateRational(self.variable, [other])
        return NotImplemented

    def __add__(self, other):
        other = self._wrap(other)
        if other is NotImplemented:
            return other
        num = upoly_add(upoly_mul(self.num, other.den), upoly_mul(other.num, self.den))
        return UnivariateRational(self.variable, num, upoly_mul(self.den, other.den),
                                  self.poles + other.poles)

    __radd__ = __add__

    def __neg__(self):
        return UnivariateRational(self.variable, upoly_scale(self.num, -1), self.den, self.poles)

    def __sub__(self, other):
        other = self._wrap(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._wrap(other)
        if other is NotImplemented:
            return other
        return UnivariateRational(self.variable, upoly_mul(self.num, other.num),
                                  upoly_mul(self.den, other.den), self.poles + other.poles)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._wrap(other)
        if other is NotImplemented:
            return other
        if not other.num:
            raise ZeroDivisionError("division by zero")
        return UnivariateRational(self.variable, upoly_mul(self.num, other.den),
                                  upoly_mul(self.den, other.num), self.poles)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = UnivariateRational(self.variable, [other])
        if not isinstance(other, UnivariateRational):
            return NotImplemented
        return self.variable == other.variable and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.variable, tuple(self.num), tuple(self.den)))

    def __call__(self, x) -> Fraction:
        d = upoly_eval(self.den, Fraction(x))
        if d == 0:
            raise ZeroDivisionError(f"pole at {x}")
        return upoly_eval(self.num, Fraction(x)) / d

    def degree_excess(self):
        """deg num - deg den (numerator zero gives -inf)."""
        if not self.num:
            return float("-inf")
        return len(self.num) - len(self.den)

    def is_proper_for_contour(self):
        """deg num <= deg den - 2, i.e. no residue at infinity."""
        return self.degree_excess() <= -2

    def __repr__(self):
        return f"UnivariateRational(x{self.variable}, num={[str(c) for c in self.num]}, den={[str(c) for c in self.den]})"


def _divisors(n: int, limit: int = 10 ** 14):
    n = abs(n)
    if n > limit:
        raise IrrationalPole("denominator coefficients too large for rational root search")
    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return small + large[::-1]


def rational_roots(p: Sequence, hints: Iterable = ()) -> dict:
    """All roots of p with multiplicity; IrrationalPole if some root is not rational."""
    p = upoly_trim(p)
    roots: dict = {}

    def strip_root(r):
        nonlocal p
        while len(p) > 1 and upoly_eval(p, r) == 0:
            p = upoly_divmod(p, [-r, Fraction(1)])[0]
            roots[r] = roots.get(r, 0) + 1

    for h in hints:
        strip_root(Fraction(h))
    if len(p) > 1:
        strip_root(Fraction(0))
    if len(p) > 1:
        # rational root theorem on an integer multiple of p
        lcm = 1
        for c in p:
            lcm = lcm * c.denominator // gcd(lcm, c.denominator)
        ints = [int(c * lcm) for c in p]
        for q in _divisors(ints[-1]):
            for a in _divisors(ints[0]):
                for s in (1, -1):
                    if len(p) == 1:
                        break
                    strip_root(Fraction(s * a, q))
    if len(p) > 1:
        raise IrrationalPole(f"denominator has a non-rational root (residual degree {len(p) - 1})")
    return roots


def residue(u: UnivariateRational, pole) -> Fraction:
    """Coefficient of 1/(z - pole) in the Laurent expansion of u at pole."""
    pole = Fraction(pole)
    den = list(u.den)
    m = 0
    while len(den) > 1 and upoly_eval(den, pole) == 0:
        den = upoly_divmod(den, [-pole, Fraction(1)])[0]
        m += 1
    if m == 0 or not u.num:
        return Fraction(0)
    # u = num / ((z - p)^m q); residue = [w^(m-1)] num(p+w)/q(p+w)
    a = upoly_shift(u.num, pole)
    b = upoly_shift(den, pole)
    series = []
    for k in range(m):
        s = a[k] if k < len(a) else Fraction(0)
        for j in range(1, min(k, len(b) - 1) + 1):
            s -= b[j] * series[k - j]
        series.append(s / b[0])
    return series[m - 1]


def as_univariate(F, variable) -> UnivariateRational:
    if isinstance(F, UnivariateRational):
        return F
    if isinstance(F, (int, Fraction)):
        return UnivariateRational(variable, [F])
    from .polynomial import Polynomial

    if isinstance(F, Polynomial):
        return UnivariateRational(variable, F.as_univariate(variable))
    return UnivariateRational(variable, list(F))


def finite_poles(u: UnivariateRational) -> dict:
    return rational_roots(u.den, u.poles)


def contour_sum(F, kernel: UnivariateRational, require_proper: bool = False) -> Fraction:
    """Sum of the residues of F*kernel at all its finite poles.

    This is the value of the integral over a circle enclosing every pole.
    With ``require_proper`` the integrand must also vanish to second order
    at infinity, otherwise ImproperIntegrand is raised.
    """
    u = as_univariate(F, kernel.variable) * kernel
    if require_proper and not u.is_proper_for_contour():
        raise ImproperIntegrand(f"integrand degree excess {u.degree_excess()} > -2")
    return sum((residue(u, p) for p in finite_poles(u)), Fraction(0))
