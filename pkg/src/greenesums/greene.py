"""Greene sums of posets.

G(P) is the sum, over linear extensions written from a maximum down to a
minimum, of the reciprocal product of consecutive variable differences.
Besides direct evaluation this module implements Greene's product formula
for planar posets, the reduction along separating subsets, the partition
and edge-contraction laws and the numerator/denominator structure facts.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Dict, List, Mapping, Optional, Tuple

from .algebra import ONE, ZERO, Polynomial, RationalFunction, det
from .errors import NotConnected, NotCoverEdge, NotIncomparable, PreconditionFailed, SizeExceeded
from .poset import (
    DEFAULT_MAX_ELEMS,
    Poset,
    SeparatingSubset,
    _bits,
    add_relations,
    contract_edge,
    cycle_rank,
    is_connected,
    linear_extensions,
    mobius,
    separating_subset,
    separating_subsets,
)


@dataclass(frozen=True)
class GreeneResult:
    value: RationalFunction
    method: str
    witness: Tuple = ()


@dataclass
class CheckReport:
    """Outcome of an identity check; truthy iff the identity held."""

    name: str
    ok: bool
    details: Dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok


def _check_size(P, max_elems):
    if max_elems is not None and P.n > max_elems:
        raise SizeExceeded(f"{P.n} elements exceeds the bound {max_elems}")


def extension_term(P: Poset, word) -> RationalFunction:
    """1 / prod (x_{w1} - x_{w2}) ... (x_{w(n-1)} - x_{wn})."""
    v = P.vars
    return RationalFunction.inverse_differences((v[a], v[b]) for a, b in zip(word, word[1:]))


def greene_enumerate(P: Poset, max_elems: Optional[int] = DEFAULT_MAX_ELEMS) -> RationalFunction:
    """Term-by-term sum over the explicit list of linear extensions."""
    total = ZERO
    for w in linear_extensions(P, max_elems):
        total = total + extension_term(P, w)
    return total


def greene_brute(P: Poset, max_elems: Optional[int] = DEFAULT_MAX_ELEMS) -> GreeneResult:
    """Sum over all linear extensions.

    Extensions sharing a tail are summed together: S(rest, last) is the sum
    over all ways to finish a word whose last placed element is ``last``
    with the down-set ``rest`` still to place.
    """
    _check_size(P, max_elems)
    if P.n <= 1:
        return GreeneResult(ONE, "brute")
    v = P.vars
    memo: Dict[Tuple[int, int], RationalFunction] = {}

    def tail(rest, last):
        if not rest:
            return ONE
        key = (rest, last)
        hit = memo.get(key)
        if hit is not None:
            return hit
        total = ZERO
        for m in _bits(rest):
            if not (P.above[m] & rest):
                sub = tail(rest & ~(1 << m), m)
                if not sub.is_zero():
                    total = total + sub * RationalFunction.inverse_differences([(v[last], v[m])])
        memo[key] = total
        return total

    full = (1 << P.n) - 1
    total = ZERO
    for m in P.maximal():
        total = total + tail(full & ~(1 << m), m)
    return GreeneResult(total, "brute")


def greene_value(P: Poset, values: Mapping[int, Fraction]) -> Fraction:
    """Numeric Greene sum at a point (keys are variable indices)."""
    if P.n <= 1:
        return Fraction(1)
    x = [Fraction(values[v]) for v in P.vars]
    memo: Dict[Tuple[int, int], Fraction] = {}

    def tail(rest, last):
        if not rest:
            return Fraction(1)
        key = (rest, last)
        if key not in memo:
            s = Fraction(0)
            for m in _bits(rest):
                if not (P.above[m] & rest):
                    s += tail(rest & ~(1 << m), m) / (x[last] - x[m])
            memo[key] = s
        return memo[key]

    full = (1 << P.n) - 1
    return sum((tail(full & ~(1 << m), m) for m in P.maximal()), Fraction(0))


def greene_product(P: Poset) -> GreeneResult:
    """Greene's formula prod_{a<b} (x_b - x_a)^mu(a,b); valid for connected planar P."""
    if not is_connected(P):
        raise NotConnected("Greene's product formula needs a connected poset")
    num = Polynomial.const(1)
    den: Dict[Tuple[int, int], int] = {}
    for a, b in P.relations():
        mu = mobius(P, a, b)
        if mu > 0:
            num = num * Polynomial.diff(P.vars[b], P.vars[a]) ** mu
        elif mu < 0:
            f = (P.vars[b], P.vars[a])
            den[f] = den.get(f, 0) - mu
    return GreeneResult(RationalFunction(num, den), "product")


# -- reduction along separating subsets -------------------------------------------


def _h_prime_inv(P, Z, i):
    """1 / h'(z_i) = 1 / prod_{j != i} (z_i - z_j)."""
    zi = P.vars[i]
    return RationalFunction.inverse_differences((zi, P.vars[j]) for j in Z.members if j != i)


def _diff_power(P, a, b, e):
    return RationalFunction(Polynomial.diff(P.vars[a], P.vars[b]) ** e)


def _fragment(P, side, z):
    return P.restrict(list(side) + [z])


def prop1_reduce(P: Poset, Z: SeparatingSubset, part: int, mirror: Optional[bool] = None,
                 sub=None) -> GreeneResult:
    """Evaluate G(P) from the Greene sums of the pieces cut by Z.

    ``part`` selects the rule: 1 (single separator), 2 (nothing below Z),
    3 (one element below Z), 4 (k > 1), 5 (k > 3, binomial expansion).
    Parts 2 and 3 also apply in mirrored form (roles of below/above
    swapped); ``mirror=None`` picks whichever form is applicable.
    """
    if sub is None:
        sub = lambda Q: greene_recursive(Q).value  # noqa: E731
    k = Z.k
    below, above = Z.below, Z.above

    def G_below(i):
        return sub(_fragment(P, below, i))

    def G_above(j):
        return sub(_fragment(P, above, j))

    if part == 1:
        if k != 1:
            raise PreconditionFailed("part 1 requires |Z| = 1")
        z = Z.members[0]
        return GreeneResult(G_below(z) * G_above(z), "prop1", (Z, 1))

    if part in (2, 3):
        need = 0 if part == 2 else 1
        if mirror is None:
            if len(below) == need:
                mirror = False
            elif len(above) == need:
                mirror = True
            else:
                clause = "P^< is empty" if part == 2 else "|P^<| = 1"
                raise PreconditionFailed(f"part {part} requires {clause} (or its mirror)")
        near, far, G_far = (above, below, G_below) if mirror else (below, above, G_above)
        if len(near) != need:
            raise PreconditionFailed(f"part {part} precondition fails on the chosen side")
        total = ZERO
        if part == 2:
            for j in Z.members:
                total = total + G_far(j) * _h_prime_inv(P, Z, j)
            if mirror and (k - 1) % 2:
                total = -total
        else:
            t = near[0]
            h_t_inv = RationalFunction.inverse_differences((P.vars[t], P.vars[z]) for z in Z.members)
            for j in Z.members:
                total = total + _diff_power(P, t, j, k - 1) * G_far(j) * _h_prime_inv(P, Z, j)
            total = -(total * h_t_inv)
            if mirror and k % 2:
                total = -total
        return GreeneResult(total, "prop1", (Z, part, "mirror" if mirror else "direct"))

    if part == 4:
        if k <= 1:
            raise PreconditionFailed("part 4 requires k > 1")
        total = ZERO
        gb = {i: G_below(i) for i in Z.members}
        ga = {j: G_above(j) for j in Z.members}
        inv = {i: _h_prime_inv(P, Z, i) for i in Z.members}
        for i in Z.members:
            for j in Z.members:
                if i != j:
                    total = total + _diff_power(P, i, j, k - 1) * gb[i] * ga[j] * inv[i] * inv[j]
        # overall sign: see the cross-check against greene_brute in the tests
        return GreeneResult(total, "prop1", (Z, 4))

    if part == 5:
        if k <= 3:
            raise PreconditionFailed("part 5 requires k > 3")
        ctx = separator_context(P, Z, sub=sub)
        return GreeneResult(prop1_part5_binomial(ctx), "prop1", (Z, 5))

    raise PreconditionFailed(f"unknown part {part}")


# -- large separators: moments and power sums ---------------------------------------


@dataclass
class SeparatorContext:
    """Separator Z with the moment data used by the binomial/determinant forms.

    Values are RationalFunctions, or Fractions when ``values`` was given.
    """

    Z: SeparatingSubset
    k: int
    z: List  # z_i as polynomials / numbers
    G_below: List  # G(P^< u z_i)
    G_above: List  # G(P^> u z_i)
    h_prime_inv: List  # 1 / h'(z_i)
    discr_inv: object  # 1 / prod_{i<j} (z_i - z_j)^2
    symbolic: bool

    def power_sum(self, j):
        s = Polynomial() if self.symbolic else Fraction(0)
        for zi in self.z:
            s = s + zi ** j
        return s

    def _moment(self, weights, j):
        s = ZERO if self.symbolic else Fraction(0)
        for zi, w in zip(self.z, weights):
            s = s + w * zi ** j
        return s

    def G_below_moment(self, j):
        return self._moment(self.G_below, j)

    def G_above_moment(self, j):
        return self._moment(self.G_above, j)

    def G_both_moment(self, j):
        return self._moment([a * b for a, b in zip(self.G_below, self.G_above)], j)

    def dd(self, values):
        """Divided difference over Z of a function given by its values at z_i."""
        s = ZERO if self.symbolic else Fraction(0)
        for v, w in zip(values, self.h_prime_inv):
            s = s + v * w
        return s


def separator_context(P: Poset, Z: SeparatingSubset, values: Optional[Mapping[int, Fraction]] = None,
                      sub=None) -> SeparatorContext:
    if sub is None:
        sub = lambda Q: greene_recursive(Q).value  # noqa: E731
    members = list(Z.members)
    if values is None:
        z = [Polynomial.var(P.vars[i]) for i in members]
        gb = [sub(_fragment(P, Z.below, i)) for i in members]
        ga = [sub(_fragment(P, Z.above, i)) for i in members]
        hp = [_h_prime_inv(P, Z, i) for i in members]
        discr_inv = RationalFunction.inverse_differences(
            [(P.vars[a], P.vars[b]) for ia, a in enumerate(members) for b in members[ia + 1:]] * 2)
        return SeparatorContext(Z, len(members), z, gb, ga, hp, discr_inv, True)
    val = {v: Fraction(values[v]) for v in P.vars}
    z = [val[P.vars[i]] for i in members]
    gb = [greene_value(_fragment(P, Z.below, i), val) for i in members]
    ga = [greene_value(_fragment(P, Z.above, i), val) for i in members]
    hp = []
    for a, za in enumerate(z):
        d = Fraction(1)
        for b, zb in enumerate(z):
            if a != b:
                d *= za - zb
        hp.append(1 / d)
    discr = Fraction(1)
    for a in range(len(z)):
        for b in range(a + 1, len(z)):
            discr *= (z[a] - z[b]) ** 2
    return SeparatorContext(Z, len(members), z, gb, ga, hp, 1 / discr, False)


def prop1_part5_binomial(ctx: SeparatorContext):
    """sum_m (-1)^m C(k-1, m) D[z^(k-m-1) G_below] D[z^m G_above]."""
    k = ctx.k
    if k <= 3:
        raise PreconditionFailed("part 5 requires k > 3")
    total = ZERO if ctx.symbolic else Fraction(0)
    for m in range(k):
        a = ctx.dd([zi ** (k - m - 1) * g for zi, g in zip(ctx.z, ctx.G_below)])
        b = ctx.dd([zi ** m * g for zi, g in zip(ctx.z, ctx.G_above)])
        term = a * b * comb(k - 1, m)
        total = total + term if m % 2 == 0 else total - term
    return total


def part5_matrix(ctx: SeparatorContext, m: int):
    """Moment/power-sum matrix whose determinant over Discr(h) is the m-th product."""
    k = ctx.k
    top = [ctx.G_both_moment(k - 1)] + [ctx.G_above_moment(k + m - 1 - c) for c in range(1, k)]
    rows = [top]
    for r in range(1, k):
        row = [ctx.G_below_moment(2 * k - m - 2 - r)]
        row += [ctx.power_sum(2 * k - 2 - r - c) for c in range(1, k)]
        rows.append(row)
    return rows


def _bordered_det(rows):
    """det of [[a, r], [c, Q]] with Q polynomial: a det Q - r adj(Q) c."""
    k = len(rows)
    Q = [row[1:] for row in rows[1:]]
    total = rows[0][0] * det(Q) if k > 1 else rows[0][0]
    for i in range(1, k):
        for j in range(1, k):
            # minor of Q removing row i-1, column j-1 gives the cofactor
            minor = [[Q[r][c] for c in range(k - 1) if c != j - 1] for r in range(k - 1) if r != i - 1]
            cof = det(minor) if minor else 1
            sign = -1 if (i + j) % 2 else 1
            total = total - rows[0][j] * rows[i][0] * cof * sign
    return total


def prop1_part5_determinant(ctx: SeparatorContext):
    """sum_m (-1)^m C(k-1, m) det(moment matrix) / Discr(h)."""
    k = ctx.k
    if k <= 3:
        raise PreconditionFailed("part 5 requires k > 3")
    total = ZERO if ctx.symbolic else Fraction(0)
    for m in range(k):
        rows = part5_matrix(ctx, m)
        d = _bordered_det(rows) if ctx.symbolic else det(rows)
        term = d * comb(k - 1, m)
        total = total + term if m % 2 == 0 else total - term
    return total * ctx.discr_inv


# -- recursive engine ------------------------------------------------------------------

_RECURSIVE_CACHE: Dict = {}


def _choose_part(Z: SeparatingSubset) -> Optional[int]:
    k = Z.k
    if k == 1:
        return 1 if Z.below and Z.above else None
    if not Z.below or not Z.above:
        return 2
    if len(Z.below) == 1 or len(Z.above) == 1:
        return 3
    return 4


def greene_recursive(P: Poset, max_elems: Optional[int] = DEFAULT_MAX_ELEMS) -> GreeneResult:
    """G(P) by repeated reduction along separating subsets, brute force otherwise."""
    _check_size(P, max_elems)
    if P.n <= 1:
        return GreeneResult(ONE, "recursive")
    key = P.key
    hit = _RECURSIVE_CACHE.get(key)
    if hit is not None:
        return hit
    if not is_connected(P):
        res = GreeneResult(ZERO, "recursive", ("disconnected",))
    else:
        res = None
        for Z in separating_subsets(P):
            part = _choose_part(Z)
            if part is not None:
                r = prop1_reduce(P, Z, part, sub=lambda Q: greene_recursive(Q, None).value)
                res = GreeneResult(r.value, "recursive", r.witness)
                break
        if res is None:
            res = GreeneResult(greene_brute(P, None).value, "recursive", ("brute",))
    if len(_RECURSIVE_CACHE) > 50000:
        _RECURSIVE_CACHE.clear()
    _RECURSIVE_CACHE[key] = res
    return res


# -- identity checks --------------------------------------------------------------------


def partition_identity_check(P: Poset, a, b) -> CheckReport:
    """G(P) = G(P + {a<b}) + G(P + {b<a}) for incomparable a, b."""
    a, b = P.id(a), P.id(b)
    if P.comparable(a, b):
        raise NotIncomparable(f"{P.names[a]} and {P.names[b]} are comparable")
    g = greene_brute(P).value
    left = greene_brute(add_relations(P, [(a, b)])).value
    right = greene_brute(add_relations(P, [(b, a)])).value
    ok = g == left + right
    return CheckReport("partition", ok, {"G": g, "G(a<b)": left, "G(b<a)": right})


def contraction_law_check(P: Poset, a, b) -> CheckReport:
    """lim_{x_a -> x_b} (x_b - x_a) G(P) equals G of P with the edge a<b contracted."""
    a, b = P.id(a), P.id(b)
    if (a, b) not in P.covers:
        raise NotCoverEdge(f"{P.names[a]} < {P.names[b]} is not a cover relation")
    va, vb = P.vars[a], P.vars[b]
    g = greene_brute(P).value
    scaled = g * RationalFunction(Polynomial.diff(vb, va))
    limit = scaled.substitute_variable(va, vb)
    # the contracted poset keeps a's variable: rename x_b -> x_a to compare
    limit = limit.substitute_variable(vb, va)
    quotient = greene_brute(contract_edge(P, a, b)).value
    return CheckReport("contraction", limit == quotient, {"limit": limit, "G(P/e)": quotient})


@dataclass
class NDStructure:
    N: Polynomial
    D: List[Tuple[int, int, int]]  # (upper var, lower var, exponent): factors (x_upper - x_lower)
    report: CheckReport


def nd_structure(P: Poset) -> NDStructure:
    """G(P) = N / D with D the product of cover-edge differences (upper - lower)."""
    if not is_connected(P):
        raise NotConnected("N/D structure is stated for connected posets")
    g = greene_brute(P).value
    edges: Dict[Tuple[int, int], int] = {}
    D_poly = Polynomial.const(1)
    D = []
    for lo, hi in sorted(P.covers):
        f = tuple(sorted((P.vars[lo], P.vars[hi])))
        edges[f] = edges.get(f, 0) + 1
        D.append((P.vars[hi], P.vars[lo], 1))
        D_poly = D_poly * Polynomial.diff(P.vars[hi], P.vars[lo])
    d_matches = g.den == edges
    # N = G * D; exact when the reduced denominator is D up to sign
    N = (g.num * D_poly).exact_div(g.denominator_poly()) if d_matches else g.num
    rank = cycle_rank(P)
    tree = rank == 0
    deg_ok = N.total_degree() == rank
    tree_ok = (N == Polynomial.const(1)) == tree
    ok = d_matches and deg_ok and tree_ok
    report = CheckReport("nd-structure", ok, {
        "D_equals_cover_differences": d_matches,
        "deg_N": N.total_degree(),
        "cycle_rank": rank,
        "N_is_one": N == Polynomial.const(1),
        "tree": tree,
    })
    return NDStructure(N, D, report)
