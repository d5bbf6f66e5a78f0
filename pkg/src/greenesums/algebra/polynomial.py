"""Sparse multivariate polynomials with exact rational coefficients.

A monomial is a dense tuple of exponents indexed by variable number, with
trailing zeros stripped, so every monomial has exactly one representation.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import zip_longest
from typing import Dict, Mapping, Tuple, Union

from ..errors import NotDivisible

Monomial = Tuple[int, ...]
Scalar = Union[int, Fraction]


def _strip(m):
    i = len(m)
    while i and m[i - 1] == 0:
        i -= 1
    return tuple(m[:i])


def _mono_mul(a, b):
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return a
    return tuple(x + y for x, y in zip_longest(a, b, fillvalue=0))


def _num(c):
    """Integral coefficients are kept as ints; others as Fractions."""
    if type(c) is int:
        return c
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


def _normalize(terms):
    for m, c in terms.items():
        if type(c) is not int and c.denominator == 1:
            terms[m] = c.numerator
    return terms


def _grlex_key(m):
    return (sum(m), m)


_P = (1 << 61) - 1  # prime modulus for the divisibility prefilter


def _point(v):
    # fixed pseudo-random evaluation point for variable v
    return (v * 0x9E3779B97F4A7C15 + 0x632BE59BD9B4E019) % _P


def default_name(v):
    return f"x{v}"


class Polynomial:
    """Immutable polynomial in variables x0, x1, ... over Q."""

    __slots__ = ("terms", "_hash", "_modvals")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        clean: Dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                if c:
                    m = _strip(m)
                    c = _num(clean.get(m, 0) + Fraction(c))
                    if c:
                        clean[m] = c
                    else:
                        clean.pop(m, None)
        self.terms = clean
        self._hash = None
        self._modvals = None

    @classmethod
    def _raw(cls, terms):
        # terms already canonical
        p = object.__new__(cls)
        p.terms = terms
        p._hash = None
        p._modvals = None
        return p

    @classmethod
    def const(cls, c: Scalar) -> "Polynomial":
        return cls._raw({(): _num(c)} if c else {})

    @classmethod
    def var(cls, i: int) -> "Polynomial":
        return cls._raw({(0,) * i + (1,): 1})

    @classmethod
    def diff(cls, i: int, j: int) -> "Polynomial":
        """x_i - x_j."""
        if i == j:
            return cls._raw({})
        return cls._raw({(0,) * i + (1,): 1, (0,) * j + (1,): -1})

    # -- predicates and accessors ------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return Fraction(self.terms.get((), 0))

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def degree_in(self, v):
        return max((m[v] if v < len(m) else 0 for m in self.terms), default=-1)

    def variables(self):
        out = set()
        for m in self.terms:
            out.update(i for i, e in enumerate(m) if e)
        return out

    def is_homogeneous(self):
        return len({sum(m) for m in self.terms}) <= 1

    # -- arithmetic ----------------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({m: -c for m, c in self.terms.items()})

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
                return Polynomial._raw({})
            return Polynomial._raw(_normalize({m: c * other for m, c in self.terms.items()}))
        if not isinstance(other, Polynomial):
            return NotImplemented
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out: Dict[Monomial, Fraction] = {}
        for mb, cb in b.items():
            for ma, ca in a.items():
                m = _mono_mul(ma, mb)
                s = out.get(m, 0) + ca * cb
                if s:
                    out[m] = s
                else:
                    del out[m]
        if any(type(c) is not int for c in a.values()) or any(type(c) is not int for c in b.values()):
            _normalize(out)
        return Polynomial._raw(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        result = Polynomial.const(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # -- evaluation and substitution ------------------------------------------

    def evaluate(self, values: Mapping[int, Scalar]) -> Fraction:
        total = Fraction(0)
        for m, c in self.terms.items():
            t = c
            for i, e in enumerate(m):
                if e:
                    t *= Fraction(values[i]) ** e
            total += t
        return total

    def subs(self, mapping: Mapping[int, Union[Scalar, "Polynomial"]]) -> "Polynomial":
        """Substitute variables by numbers or polynomials; others are kept."""
        if not mapping:
            return self
        powcache: Dict[Tuple[int, int], Polynomial] = {}

        def power(v, e):
            key = (v, e)
            if key not in powcache:
                val = mapping[v]
                if isinstance(val, Polynomial):
                    powcache[key] = val ** e
                else:
                    powcache[key] = Polynomial.const(Fraction(val) ** e)
            return powcache[key]

        out = Polynomial()
        for m, c in self.terms.items():
            keep = list(m)
            factor = Polynomial.const(c)
            for i, e in enumerate(m):
                if e and i in mapping:
                    keep[i] = 0
                    factor = factor * power(i, e)
            out = out + factor * Polynomial._raw({_strip(keep): 1})
        return out

    def rename(self, v: int, w: int) -> "Polynomial":
        """Replace variable v by variable w (x_v -> x_w)."""
        if v == w:
            return self
        out: Dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            if v < len(m) and m[v]:
                e = m[v]
                lst = list(m) + [0] * max(0, w + 1 - len(m))
                lst[v] = 0
                lst[w] += e
                m = _strip(lst)
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial._raw(out)

    def as_univariate(self, v: int):
        """Coefficient list (low to high) in x_v; fails if other variables occur."""
        if self.variables() - {v}:
            raise ValueError(f"polynomial involves variables other than x{v}")
        deg = max(self.degree_in(v), 0)
        coeffs = [Fraction(0)] * (deg + 1)
        for m, c in self.terms.items():
            coeffs[m[v] if v < len(m) else 0] += c
        return coeffs

    # -- division ------------------------------------------------------------

    def _mod_values(self):
        """Each term's value at the base point, mod the prefilter prime (cached)."""
        if self._modvals is None:
            vals = []
            for m, c in self.terms.items():
                den = c.denominator
                if den % _P == 0:
                    vals = False
                    break
                t = c.numerator % _P
                if den != 1:
                    t = t * pow(den, _P - 2, _P) % _P
                for i, e in enumerate(m):
                    if e:
                        t = t * pow(_point(i), e, _P) % _P
                vals.append((m, t))
            self._modvals = vals
        return self._modvals

    def _vanishes_mod_p(self, hi, lo) -> bool:
        """False only if self(x_hi := x_lo) is certainly nonzero."""
        vals = self._mod_values()
        if vals is False:
            return True  # undecided here; the exact test will run
        ratio = _point(lo) * pow(_point(hi), _P - 2, _P) % _P
        pw = {0: 1}
        total = 0
        for m, t in vals:
            e = m[hi] if hi < len(m) else 0
            if e not in pw:
                pw[e] = pow(ratio, e, _P)
            total += t * pw[e]
        return total % _P == 0

    def divides_linear(self, hi: int, lo: int) -> bool:
        """Whether (x_hi - x_lo) divides self (factor theorem)."""
        if not self._vanishes_mod_p(hi, lo):
            return False
        return self.rename(hi, lo).is_zero()

    def div_linear(self, hi: int, lo: int, check: bool = True) -> "Polynomial":
        """Exact quotient by (x_hi - x_lo); raises NotDivisible."""
        if check and not self.divides_linear(hi, lo):
            raise NotDivisible(f"not divisible by (x{hi} - x{lo})")
        # group by exponent of x_hi: self = sum_e c_e * x_hi^e
        groups: Dict[int, Dict[Monomial, Fraction]] = {}
        for m, c in self.terms.items():
            e = m[hi] if hi < len(m) else 0
            rest = list(m)
            if e:
                rest[hi] = 0
            groups.setdefault(e, {})[_strip(rest)] = c
        top = max(groups)
        xl = Polynomial.var(lo)
        xh = Polynomial.var(hi)
        # synthetic division: q_{e-1} = c_e + x_lo * q_e
        q = Polynomial()
        carry = Polynomial()
        for e in range(top, 0, -1):
            carry = Polynomial._raw(groups.get(e, {})) + xl * carry
            q = q + carry * xh ** (e - 1)
        return q

    def exact_div(self, d: "Polynomial") -> "Polynomial":
        """Exact quotient self / d, or raise NotDivisible."""
        if d.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if d.is_constant():
            return self * (1 / d.constant_value())
        if len(d.terms) == 2:
            lin = _as_difference(d)
            if lin is not None:
                hi, lo, scale = lin
                return self.div_linear(hi, lo) * (1 / Fraction(scale))
        width = max([len(m) for m in self.terms] + [len(m) for m in d.terms] + [0])

        def pad(m):
            return m + (0,) * (width - len(m))

        lead_d = max(d.terms, key=pad)
        lead_c = d.terms[lead_d]
        ld = pad(lead_d)
        rem = dict(self.terms)
        quot: Dict[Monomial, Fraction] = {}
        while rem:
            lm = max(rem, key=pad)
            lp = pad(lm)
            if any(a < b for a, b in zip(lp, ld)):
                raise NotDivisible("nonzero remainder")
            qm = _strip(tuple(a - b for a, b in zip(lp, ld)))
            qc = _num(Fraction(rem[lm]) / lead_c)
            quot[qm] = qc
            for m, c in d.terms.items():
                mm = _mono_mul(m, qm)
                s = rem.get(mm, 0) - qc * c
                if s:
                    rem[mm] = s
                else:
                    rem.pop(mm, None)
        return Polynomial._raw(quot)

    # -- text ----------------------------------------------------------------

    def sorted_terms(self):
        """Terms in descending graded-lexicographic order."""
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def format(self, names=None) -> str:
        name = (lambda v: names[v]) if names is not None else default_name
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            factors = []
            for i, e in enumerate(m):
                if e == 1:
                    factors.append(name(i))
                elif e > 1:
                    factors.append(f"{name(i)}^{e}")
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = str(mag) + "*" + "*".join(factors)
            parts.append(("-" if c < 0 else "+", body))
        sign, body = parts[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"Polynomial({self.format()!r})"


def _as_difference(d):
    """If d = s*(x_hi - x_lo) with hi < lo, return (hi, lo, s)."""
    items = list(d.terms.items())
    if len(items) != 2:
        return None
    (m1, c1), (m2, c2) = items
    if c1 != -c2 or sum(m1) != 1 or sum(m2) != 1:
        return None
    v1 = len(m1) - 1
    v2 = len(m2) - 1
    if v1 < v2:
        return v1, v2, c1
    return v2, v1, c2


def poly_arith(a: Polynomial, b: Polynomial, kind: str) -> Polynomial:
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    raise ValueError(f"unknown kind {kind!r}")


def poly_exact_div(n: Polynomial, d: Polynomial) -> Polynomial:
    return n.exact_div(d)
