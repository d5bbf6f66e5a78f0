"""Differential forms with difference-factored rational coefficients.

Only what is needed for the Arnold relation and the signed sum of
logarithmic forms over linear extensions: 1-forms d(x_i - x_j)/(x_i - x_j)
(the 1/(2 pi i) normalization is dropped), wedge products and equality.
"""
from __future__ import annotations

from itertools import combinations
from typing import Dict, Iterable, Mapping, Tuple

from .algebra import RationalFunction
from .errors import EqualIndices, LabelingNotExtension, SizeExceeded
from .greene import CheckReport, greene_brute
from .poset import Poset, build_poset, is_linear_extension, linear_extensions

Subset = Tuple[int, ...]


class WedgeForm:
    """sum_S c_S dx_S over strictly increasing index tuples S of fixed size."""

    __slots__ = ("degree", "coeffs")

    def __init__(self, degree: int, coeffs: Mapping[Subset, object] | None = None):
        self.degree = degree
        self.coeffs: Dict[Subset, RationalFunction] = {}
        for S, c in (coeffs or {}).items():
            S = tuple(S)
            if len(S) != degree or any(a >= b for a, b in zip(S, S[1:])):
                raise ValueError(f"basis index {S} is not a strictly increasing {degree}-tuple")
            c = c if isinstance(c, RationalFunction) else RationalFunction(c)
            if not c.is_zero():
                self.coeffs[S] = c

    @classmethod
    def scalar(cls, c=1):
        return cls(0, {(): c})

    @classmethod
    def dx(cls, i: int):
        return cls(1, {(i,): 1})

    def is_zero(self):
        return not self.coeffs

    def __add__(self, other: "WedgeForm"):
        if other.degree != self.degree and not (self.is_zero() or other.is_zero()):
            raise ValueError("adding forms of different degrees")
        out = dict(self.coeffs)
        for S, c in other.coeffs.items():
            out[S] = out[S] + c if S in out else c
        return WedgeForm(self.degree if self.coeffs else other.degree, out)

    def __neg__(self):
        return WedgeForm(self.degree, {S: -c for S, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "WedgeForm":
        return WedgeForm(self.degree, {S: v * c for S, v in self.coeffs.items()})

    def __eq__(self, other):
        if not isinstance(other, WedgeForm):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        return self.degree == other.degree and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.degree, frozenset(self.coeffs.items())))

    def format(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for S in sorted(self.coeffs):
            basis = "^".join(f"dx{i}" for i in S) or "1"
            parts.append(f"({self.coeffs[S].format()}) {basis}")
        return " + ".join(parts)

    def __repr__(self):
        return f"WedgeForm({self.degree}, {self.format()})"


def _merge_sign(S: Subset, T: Subset) -> int:
    """Sign of the shuffle sorting S + T; 0 if they overlap."""
    if set(S) & set(T):
        return 0
    inv = sum(1 for s in S for t in T if s > t)
    return -1 if inv % 2 else 1


def wedge(a: WedgeForm, b: WedgeForm) -> WedgeForm:
    out: Dict[Subset, RationalFunction] = {}
    for S, c in a.coeffs.items():
        for T, d in b.coeffs.items():
            sgn = _merge_sign(S, T)
            if not sgn:
                continue
            U = tuple(sorted(S + T))
            v = c * d if sgn > 0 else -(c * d)
            out[U] = out[U] + v if U in out else v
    return WedgeForm(a.degree + b.degree, out)


def wedge_all(forms: Iterable[WedgeForm]) -> WedgeForm:
    out = WedgeForm.scalar()
    for f in forms:
        out = wedge(out, f)
    return out


def d_difference(i: int, j: int) -> WedgeForm:
    """d(x_i - x_j) = dx_i - dx_j."""
    if i == j:
        raise EqualIndices(f"d(x{i} - x{i}) is zero")
    return WedgeForm(1, {(i,): 1, (j,): -1}) if i < j else WedgeForm(1, {(j,): -1, (i,): 1})


def omega(i: int, j: int) -> WedgeForm:
    """d(x_i - x_j) / (x_i - x_j)."""
    if i == j:
        raise EqualIndices(f"omega needs distinct indices, got {i} twice")
    return d_difference(i, j).scale(RationalFunction.inverse_differences([(i, j)]))


def arnold_relation_check(i: int, j: int, k: int) -> CheckReport:
    s = wedge(omega(i, j), omega(j, k)) + wedge(omega(k, i), omega(i, j)) + wedge(omega(j, k), omega(k, i))
    return CheckReport("arnold", s.is_zero(), {"sum": s.format()})


# -- signed sums over linear extensions ---------------------------------------------------


def _labels(P: Poset):
    return sorted(range(P.n), key=lambda e: P.vars[e])


def _inversions(seq) -> int:
    return sum(1 for a in range(len(seq)) for b in range(a + 1, len(seq)) if seq[a] > seq[b])


def alternating_omit_form(indices) -> WedgeForm:
    """sum_i (-1)^(n-i) dx_1 ^ ... (omit dx_i) ... ^ dx_n over the given increasing indices."""
    idx = tuple(indices)
    n = len(idx)
    return WedgeForm(n - 1, {idx[:i] + idx[i + 1:]: (-1) ** (n - 1 - i) for i in range(n)})


def signed_extension_sum(P: Poset) -> WedgeForm:
    """sum over L(P) of sign(alpha) omega_{a1 a2} ^ ... ^ omega_{a(n-1) an}.

    Dynamic programming over (placed set, last element); the sign of the
    permutation is accumulated one letter at a time from inversion counts.
    """
    v = P.vars
    rank = {e: r for r, e in enumerate(_labels(P))}
    if P.n == 0:
        return WedgeForm.scalar()
    layer: Dict[Tuple[int, int], WedgeForm] = {}
    for m in P.maximal():
        layer[(1 << m, m)] = WedgeForm.scalar()
    for _ in range(P.n - 1):
        nxt: Dict[Tuple[int, int], WedgeForm] = {}
        for (placed, last), form in layer.items():
            for e in range(P.n):
                if placed >> e & 1 or P.above[e] & ~placed:
                    continue
                # letters already placed with a larger label now form inversions with e
                inv = sum(1 for f in range(P.n) if placed >> f & 1 and rank[f] > rank[e])
                step = wedge(form, omega(v[last], v[e]))
                if inv % 2:
                    step = -step
                key = (placed | 1 << e, e)
                nxt[key] = nxt[key] + step if key in nxt else step
        layer = nxt
    total = WedgeForm(P.n - 1)
    for form in layer.values():
        total = total + form
    return total


def signed_extension_sum_literal(P: Poset, max_elems: int = 7) -> WedgeForm:
    """The same sum, one extension at a time."""
    if P.n > max_elems:
        raise SizeExceeded(f"literal enumeration limited to {max_elems} elements")
    v = P.vars
    rank = {e: r for r, e in enumerate(_labels(P))}
    total = WedgeForm(max(P.n - 1, 0))
    for word in linear_extensions(P, max_elems):
        f = wedge_all(omega(v[a], v[b]) for a, b in zip(word, word[1:]))
        total = total + (-f if _inversions([rank[e] for e in word]) % 2 else f)
    return total


def signed_extension_identity_check(P: Poset, literal: bool = False) -> CheckReport:
    """Signed sum of omega-products over L(P) against (alternating form) * G(P).

    Labels are the variable indices in increasing order, and that order,
    read as a word from a maximum downwards, must be a linear extension.
    """
    if P.n > 7:
        raise SizeExceeded("the form identity is checked for at most 7 elements")
    order = _labels(P)
    if not is_linear_extension(P, order):
        raise LabelingNotExtension("increasing variable order is not a linear extension")
    lhs = signed_extension_sum_literal(P) if literal else signed_extension_sum(P)
    G = greene_brute(P).value
    rhs = alternating_omit_form(sorted(P.vars)).scale(G)
    return CheckReport("signed-extension", lhs == rhs, {"lhs": lhs.format(), "rhs": rhs.format()})


def relabel_to_extension(P: Poset) -> Poset:
    """Reassign variables so that their increasing order is a linear extension."""
    word = linear_extensions(P, None)[0] if P.n else ()
    vs = sorted(P.vars)
    new = [0] * P.n
    for pos, e in enumerate(word):
        new[e] = vs[pos]
    return P.relabel(new)


def three_element_posets():
    """Every non-chain order on x1 > ... labels {0, 1, 2} compatible with 0, 1, 2 as an extension."""
    pairs = [(a, b) for a in range(3) for b in range(3) if a != b]
    seen = set()
    out = []
    for r in range(0, 4):
        for rels in combinations(pairs, r):
            try:
                P = build_poset([f"x{i + 1}" for i in range(3)], rels)
            except Exception:
                continue
            if P.key in seen:
                continue
            seen.add(P.key)
            if len(linear_extensions(P)) == 1 or not is_linear_extension(P, (0, 1, 2)):
                continue
            out.append(P)
    return out
