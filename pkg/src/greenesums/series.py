"""Newton-type expansions driven by sequences of marked posets.

A marked poset carries a Hasse edge x < z. Its Greene sum splits into the
extension terms in which x comes right after z (they carry the factor
1/(z - x)) and the rest. Chaining that split over a sequence of posets
gives an interpolation series; the numerator/denominator form of a single
Greene sum gives a Lagrange-type decomposition.

Contour integrals are sums of residues at every finite pole.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence

from .algebra import Polynomial, RationalFunction, UnivariateRational, contour_sum
from .algebra.univariate import upoly_eval
from .errors import (
    DivisionByZero,
    ImproperIntegrand,
    NotConnected,
    NotCoverEdge,
    PoleAtX,
    PreconditionFailed,
)
from .greene import CheckReport, greene_brute, nd_structure
from .interp import FunctionValue, lagrange_coeffs, newton_series
from .poset import DEFAULT_MAX_ELEMS, Poset, _bits, build_poset, is_connected


@dataclass(frozen=True)
class MarkedPoset:
    poset: Poset
    x_elem: int
    z_elem: int

    def __post_init__(self):
        P = self.poset
        x, z = P.id(self.x_elem), P.id(self.z_elem)
        object.__setattr__(self, "x_elem", x)
        object.__setattr__(self, "z_elem", z)
        if not is_connected(P):
            raise NotConnected("marked posets must be connected")
        if (x, z) not in P.covers:
            raise NotCoverEdge(f"{P.names[x]} < {P.names[z]} is not a Hasse edge")

    @property
    def x_var(self) -> int:
        return self.poset.vars[self.x_elem]

    @property
    def z_var(self) -> int:
        return self.poset.vars[self.z_elem]


@dataclass
class SplitGreene:
    """G = G''/(z - x) + G''' and G' = (z - x) G."""

    G: RationalFunction
    G_prime: RationalFunction
    G_dprime: RationalFunction
    G_tprime: RationalFunction
    z_var: int
    x_var: int

    def recombination_ok(self) -> bool:
        inv = RationalFunction.inverse_differences([(self.z_var, self.x_var)])
        zx = RationalFunction(Polynomial.diff(self.z_var, self.x_var))
        return self.G == self.G_dprime * inv + self.G_tprime and self.G_prime == self.G * zx


def _split_sum(P: Poset, z: int, x: int, adjacent: bool) -> RationalFunction:
    # memoised tail sums, keeping only words where x does (or does not) come right after z
    v = P.vars
    memo: Dict[tuple, RationalFunction] = {}
    zero, one = RationalFunction(0), RationalFunction(1)

    def tail(rest, last):
        if not rest:
            return zero if adjacent and last == z else one
        key = (rest, last)
        hit = memo.get(key)
        if hit is not None:
            return hit
        total = zero
        for m in _bits(rest):
            if P.above[m] & rest:
                continue
            if last == z and (m == x) != adjacent:
                continue
            sub = tail(rest & ~(1 << m), m)
            if not sub.is_zero():
                total = total + sub * RationalFunction.inverse_differences([(v[last], v[m])])
        memo[key] = total
        return total

    full = (1 << P.n) - 1
    total = zero
    for m in P.maximal():
        total = total + tail(full & ~(1 << m), m)
    return total


def split_greene(mp: MarkedPoset, max_elems: Optional[int] = DEFAULT_MAX_ELEMS) -> SplitGreene:
    """Split G(P) by whether x immediately follows z in the extension word.

    Both parts are summed independently of G, so recombination is a real check.
    """
    P = mp.poset
    G = greene_brute(P, max_elems).value
    zx = RationalFunction(Polynomial.diff(mp.z_var, mp.x_var))
    dprime = _split_sum(P, mp.z_elem, mp.x_elem, True) * zx
    tprime = _split_sum(P, mp.z_elem, mp.x_elem, False)
    return SplitGreene(G, G * zx, dprime, tprime, mp.z_var, mp.x_var)


def recursion_step_check(mp: MarkedPoset, assignment: Optional[Mapping[int, Fraction]] = None) -> CheckReport:
    """1/(z - x) = -G'''/G'' + (G'/G'') / (z - x).

    With a full numeric assignment the check is numeric; otherwise it is
    done symbolically after clearing the denominator G''(z - x).
    """
    s = split_greene(mp)
    vs = set(mp.poset.vars)
    if assignment is not None and vs <= set(assignment):
        vals = {v: Fraction(assignment[v]) for v in vs}
        zx = vals[mp.z_var] - vals[mp.x_var]
        gp, gd, gt = (r.evaluate(vals) for r in (s.G_prime, s.G_dprime, s.G_tprime))
        if gd == 0:
            raise DivisionByZero("G'' vanishes at this assignment")
        lhs = 1 / zx
        rhs = -gt / gd + gp / gd / zx
        return CheckReport("recursion-step", lhs == rhs, {"lhs": lhs, "rhs": rhs})
    zx = RationalFunction(Polynomial.diff(mp.z_var, mp.x_var))
    lhs = s.G_dprime
    rhs = s.G_prime - s.G_tprime * zx
    return CheckReport("recursion-step", lhs == rhs, {"G''": lhs, "G' - (z-x)G'''": rhs})


# -- sequences ----------------------------------------------------------------------------


@dataclass
class MarkedPosetSequence:
    """Marked posets sharing the variables of x and z and nothing else."""

    items: List[MarkedPoset] = field(default_factory=list)

    def __post_init__(self):
        if not self.items:
            return
        z, x = self.items[0].z_var, self.items[0].x_var
        seen = set()
        for mp in self.items:
            if (mp.z_var, mp.x_var) != (z, x):
                raise PreconditionFailed("every item must use the same x and z variables")
            own = set(mp.poset.vars) - {z, x}
            if own & seen:
                raise PreconditionFailed("items share variables outside x and z")
            seen |= own

    def __len__(self):
        return len(self.items)

    @property
    def z_var(self):
        return self.items[0].z_var

    @property
    def x_var(self):
        return self.items[0].x_var

    def free_variables(self) -> List[int]:
        out = set()
        for mp in self.items:
            out |= set(mp.poset.vars)
        return sorted(out - {self.z_var, self.x_var})


def triangle_sequence(n: int) -> MarkedPosetSequence:
    """P_i: z above x and x_i. Variables: z = 0, x = 1, x_i = 1 + i."""
    items = []
    for i in range(1, n + 1):
        P = build_poset([("z", 0), ("x", 1), (f"x{i}", 1 + i)], [("x", "z"), (f"x{i}", "z")])
        items.append(MarkedPoset(P, "x", "z"))
    return MarkedPosetSequence(items)


def star_sequence(ms: Sequence[int]) -> MarkedPosetSequence:
    """P_i: z above x and x_{1i}, ..., x_{m_i i}, fresh variables for each i."""
    items = []
    nxt = 2
    for i, m in enumerate(ms, start=1):
        elems = [("z", 0), ("x", 1)]
        rels = [("x", "z")]
        for j in range(1, m + 1):
            name = f"x{j}_{i}"
            elems.append((name, nxt))
            rels.append((name, "z"))
            nxt += 1
        items.append(MarkedPoset(build_poset(elems, rels), "x", "z"))
    return MarkedPosetSequence(items)


# -- contour machinery ---------------------------------------------------------------------


def _poly_coeffs(F) -> List[Fraction]:
    F = FunctionValue.coerce(F)
    if not F.is_polynomial:
        raise PreconditionFailed("F must be a polynomial")
    return list(F.coeffs)


def _integrate(F, kernel: UnivariateRational, require_proper: bool, label):
    u = UnivariateRational(kernel.variable, F, [1]) * kernel
    proper = u.is_proper_for_contour()
    if require_proper and not proper:
        raise ImproperIntegrand(f"{label}: integrand degree excess {u.degree_excess()} > -2")
    return contour_sum(F, kernel), proper


@dataclass
class Expansion:
    terms: List[Fraction]
    tail: Fraction
    report: CheckReport

    @property
    def total(self):
        return sum(self.terms, Fraction(0)) + self.tail


def prop4_expand(seq: MarkedPosetSequence, F, n: int, assignment: Mapping[int, Fraction], x,
                 require_proper: bool = False) -> Expansion:
    """F(x) = -sum_i oint G'_{i-1} G'''_i F / G''_i + oint G'_n F / (G''_n (z - x)).

    G'_i and G''_i are cumulative products over the first i items. Every
    variable other than z must be numeric; x is given separately.
    """
    if n < 2:
        raise PreconditionFailed("the expansion is stated for n >= 2")
    if len(seq) < n:
        raise PreconditionFailed(f"sequence has {len(seq)} items, need {n}")
    coeffs = _poly_coeffs(F)
    zv, xv = seq.z_var, seq.x_var
    x = Fraction(x)
    assign = {v: Fraction(assignment[v]) for v in seq.free_variables()}
    assign[xv] = x
    if x in set(assign[v] for v in seq.free_variables()):
        raise PoleAtX("x coincides with another node")

    one = UnivariateRational(zv, [1])
    Gp_cum = one
    Gd_cum = one
    terms, proper = [], []
    for i, mp in enumerate(seq.items[:n], start=1):
        s = split_greene(mp)
        local = {v: assign[v] for v in mp.poset.vars if v != zv}
        gp = s.G_prime.specialize(local, zv)
        gd = s.G_dprime.specialize(local, zv)
        gt = s.G_tprime.specialize(local, zv)
        if not gd.num:
            raise DivisionByZero(f"G'' of item {i} vanishes at this assignment")
        Gd_cum = Gd_cum * gd
        kernel = Gp_cum * gt / Gd_cum
        val, ok = _integrate(coeffs, kernel, require_proper, f"term {i}")
        terms.append(-val)
        proper.append(ok)
        Gp_cum = Gp_cum * gp
    zx_inv = UnivariateRational(zv, [1], [-x, 1], poles=[x])
    tail, tail_ok = _integrate(coeffs, Gp_cum / Gd_cum * zx_inv, require_proper, "tail")
    Fx = upoly_eval(coeffs, x)
    total = sum(terms, Fraction(0)) + tail
    report = CheckReport("prop4", total == Fx, {
        "total": total, "F(x)": Fx, "proper_terms": proper, "proper_tail": tail_ok,
    })
    return Expansion(terms, tail, report)


def triangle_newton_check(F, nodes: Sequence, x) -> CheckReport:
    """The triangle-sequence expansion against the Newton series, term by term."""
    n = len(nodes)
    seq = triangle_sequence(n)
    assign = {1 + i: Fraction(v) for i, v in enumerate(nodes, start=1)}
    exp = prop4_expand(seq, F, n, assign, x)
    ns = newton_series(F, list(nodes), x)
    terms_ok = exp.terms == ns.terms
    tail_ok = exp.tail == ns.remainder
    ok = bool(exp.report) and terms_ok and tail_ok
    return CheckReport("prop4-triangle", ok, {
        "terms": exp.terms, "newton_terms": ns.terms, "tail": exp.tail,
        "newton_remainder": ns.remainder, "total_ok": bool(exp.report),
    })


def _specialize_poly(p: Polynomial, assign, keep) -> List[Fraction]:
    return p.subs({v: assign[v] for v in p.variables() if v != keep}).as_univariate(keep)


def prop5_expand(P: Poset, z, F, assignment: Mapping[int, Fraction], x) -> Expansion:
    """F(x) as a main part plus a remainder built from G(P) = N(z)/D(z).

    ``terms`` holds the single main part and ``tail`` the remainder. In the
    tree case the main part is checked against the N = 1 form, and for a
    star with top z against the Lagrange polynomial of F on the other nodes.
    """
    z = P.id(z)
    zv = P.vars[z]
    coeffs = _poly_coeffs(F)
    x = Fraction(x)
    assign = {v: Fraction(assignment[v]) for v in P.vars if v != zv}
    nd = nd_structure(P)
    g = greene_brute(P).value
    if nd.report.details["D_equals_cover_differences"]:
        N_poly = nd.N
        D_factors = [(hi, lo) for hi, lo, e in nd.D for _ in range(e)]
    else:  # pragma: no cover - the structure facts hold on every tested poset
        N_poly = g.num
        D_factors = [(a, b) for a, b, e in g.denominator_factors() for _ in range(e)]

    N = _specialize_poly(N_poly, assign, zv)
    D = [Fraction(1)]
    poles = []
    scale = Fraction(1)
    for hi, lo in D_factors:
        if hi == zv:
            D = _mul_linear(D, assign[lo])
            poles.append(assign[lo])
        elif lo == zv:
            D = _mul_linear(D, assign[hi])
            scale = -scale
            poles.append(assign[hi])
        else:
            scale *= assign[hi] - assign[lo]
    D = [c * scale for c in D]
    Nx, Dx = upoly_eval(N, x), upoly_eval(D, x)
    if Nx == 0 or Dx == 0:
        raise PoleAtX(f"x = {x} is a zero of N or D")
    c = Dx / Nx
    zx_inv = UnivariateRational(zv, [1], [-x, 1], poles=[x])
    ratio = UnivariateRational(zv, D, N, poles=())
    N_over_D = UnivariateRational(zv, N, D, poles=poles)
    main = contour_sum(coeffs, (ratio - c) * zx_inv * N_over_D)
    remainder = c * contour_sum(coeffs, N_over_D * zx_inv)
    Fx = upoly_eval(coeffs, x)
    details = {"main": main, "remainder": remainder, "F(x)": Fx, "tree": nd.report.details["tree"]}
    ok = main + remainder == Fx
    if N == [Fraction(1)]:
        D_u = UnivariateRational(zv, D, poles=poles)
        inv_D = UnivariateRational(zv, [1], D, poles=poles)
        main8 = contour_sum(coeffs, (D_u - Dx) * zx_inv * inv_D)
        rem8 = Dx * contour_sum(coeffs, zx_inv * inv_D)
        details["tree_form_matches"] = main8 == main and rem8 == remainder
        ok = ok and details["tree_form_matches"]
        others = [e for e in range(P.n) if e != z]
        if others and all((e, z) in P.covers for e in others) and len(P.covers) == len(others):
            L = lagrange_coeffs(coeffs, [assign[P.vars[e]] for e in others])
            details["lagrange_matches"] = upoly_eval(L, x) == main
            ok = ok and details["lagrange_matches"]
    return Expansion([main], remainder, CheckReport("prop5", ok, details))


def _mul_linear(p, root):
    """p(z) * (z - root)."""
    out = [Fraction(0)] * (len(p) + 1)
    for i, c in enumerate(p):
        out[i + 1] += c
        out[i] -= c * root
    return out
