"""Divided differences and interpolation.

Divided differences come in three interchangeable shapes: the symmetric
sum over nodes, a ratio of Vandermonde-type determinants and a residue sum.
On top of them sit Newton series, Lagrange interpolation (classical and
as a sum over all orderings of the nodes) and the determinantal identities
that connect Greene sums of bipartite and fence posets to divided
differences of g/f.

Node positions are 1-based in every public function, matching x_1..x_n.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from typing import Callable, Dict, List, Optional, Sequence

from .algebra import Polynomial, RationalFunction, UnivariateRational, contour_sum, det
from .algebra.univariate import upoly_add, upoly_divmod, upoly_eval, upoly_from_roots, upoly_mul, upoly_scale, upoly_trim
from .errors import DuplicateNode, PreconditionFailed, TruncationRequired
from .greene import CheckReport, greene_value
from .poset import add_relations, catalog


class NodeSet:
    """Ordered interpolation nodes, either rationals or variable indices."""

    __slots__ = ("nodes", "symbolic")

    def __init__(self, nodes, symbolic: bool = False):
        if symbolic:
            nodes = tuple(int(v) for v in nodes)
        else:
            nodes = tuple(Fraction(v) for v in nodes)
        if len(set(nodes)) != len(nodes):
            raise DuplicateNode(f"nodes are not pairwise distinct: {[str(v) for v in nodes]}")
        self.nodes = nodes
        self.symbolic = symbolic

    @classmethod
    def numeric(cls, values):
        return cls(values, False)

    @classmethod
    def variables(cls, indices):
        return cls(indices, True)

    def __len__(self):
        return len(self.nodes)

    def __iter__(self):
        return iter(self.nodes)

    def __getitem__(self, i):
        return self.nodes[i]

    def elements(self):
        """Nodes as ring elements: Fractions, or Polynomials x_v."""
        if self.symbolic:
            return [Polynomial.var(v) for v in self.nodes]
        return list(self.nodes)

    def take(self, positions) -> "NodeSet":
        return NodeSet([self.nodes[p] for p in positions], self.symbolic)

    def prefix(self, m) -> "NodeSet":
        return NodeSet(self.nodes[:m], self.symbolic)

    def band(self, i, j) -> "NodeSet":
        """Z_{i,j} = {z_i, ..., z_j} (1-based, inclusive)."""
        return NodeSet(self.nodes[i - 1:j], self.symbolic)

    def without(self, i) -> "NodeSet":
        return NodeSet(self.nodes[:i - 1] + self.nodes[i:], self.symbolic)

    def with_node(self, v) -> "NodeSet":
        return NodeSet(self.nodes + (v,), self.symbolic)

    def __repr__(self):
        kind = "variables" if self.symbolic else "numeric"
        return f"NodeSet.{kind}({[str(v) for v in self.nodes]})"


def _nodes(X) -> NodeSet:
    return X if isinstance(X, NodeSet) else NodeSet.numeric(X)


class FunctionValue:
    """A function of one variable given by coefficients, a table or a callable."""

    __slots__ = ("coeffs", "table", "func")

    def __init__(self, coeffs=None, table=None, func=None):
        self.coeffs = upoly_trim(coeffs) if coeffs is not None else None
        self.table = {Fraction(k): Fraction(v) for k, v in table.items()} if table is not None else None
        self.func = func

    @classmethod
    def polynomial(cls, p, variable: Optional[int] = None):
        if isinstance(p, Polynomial):
            vs = p.variables()
            if variable is None:
                if len(vs) > 1:
                    raise ValueError("polynomial in several variables needs a designated variable")
                variable = next(iter(vs), 0)
            return cls(coeffs=p.as_univariate(variable))
        return cls(coeffs=list(p))

    @classmethod
    def coerce(cls, F) -> "FunctionValue":
        if isinstance(F, FunctionValue):
            return F
        if isinstance(F, Polynomial):
            return cls.polynomial(F)
        if isinstance(F, dict):
            return cls(table=F)
        if callable(F):
            return cls(func=F)
        if isinstance(F, (int, Fraction)):
            return cls(coeffs=[F])
        return cls(coeffs=list(F))

    @property
    def is_polynomial(self):
        return self.coeffs is not None

    def degree(self):
        if self.coeffs is None:
            raise PreconditionFailed("degree of a non-polynomial function")
        return len(self.coeffs) - 1

    def __call__(self, t):
        if self.coeffs is not None:
            if isinstance(t, Polynomial):
                out = Polynomial()
                for k, c in enumerate(self.coeffs):
                    out = out + t ** k * c
                return out
            return upoly_eval(self.coeffs, Fraction(t))
        if self.table is not None:
            if isinstance(t, Polynomial):
                raise PreconditionFailed("a value table cannot be evaluated at a symbolic node")
            try:
                return self.table[Fraction(t)]
            except KeyError:
                raise PreconditionFailed(f"value table has no entry for {t}") from None
        return self.func(t)


# -- products and divided differences -------------------------------------------------


def R_product(X, Y):
    """R(X, Y) = prod_{x in X, y in Y} (x - y)."""
    X, Y = _as_elements(X), _as_elements(Y)
    symbolic = any(isinstance(v, Polynomial) for v in X + Y)
    out = Polynomial.const(1) if symbolic else Fraction(1)
    for x in X:
        for y in Y:
            out = out * (x - y)
    return out


def _as_elements(X):
    if isinstance(X, NodeSet):
        return X.elements()
    return [v if isinstance(v, Polynomial) else Fraction(v) for v in X]


def _inverse_vandermonde(X: NodeSet):
    """1 / prod_{i<j} (x_i - x_j)."""
    if X.symbolic:
        return RationalFunction.inverse_differences(
            [(X[i], X[j]) for i in range(len(X)) for j in range(i + 1, len(X))])
    d = Fraction(1)
    for i in range(len(X)):
        for j in range(i + 1, len(X)):
            d *= X[i] - X[j]
    return 1 / d


def _dd_sum(F, X: NodeSet):
    if X.symbolic:
        total = RationalFunction(0)
        for i, v in enumerate(X):
            fi = F(Polynomial.var(v))
            inv = RationalFunction.inverse_differences([(v, w) for w in X if w != v])
            total = total + inv * fi
        return total
    total = Fraction(0)
    for v in X:
        d = Fraction(1)
        for w in X:
            if w != v:
                d *= v - w
        total += F(v) / d
    return total


def _dd_det(F, X: NodeSet):
    n = len(X)
    xs = X.elements()
    if X.symbolic:
        rows = [[RationalFunction(F(x))] + [RationalFunction(x ** (n - 2 - c)) for c in range(n - 1)] for x in xs]
    else:
        rows = [[F(x)] + [x ** (n - 2 - c) for c in range(n - 1)] for x in xs]
    return det(rows) * _inverse_vandermonde(X)


def _dd_residue(F: FunctionValue, X: NodeSet):
    if X.symbolic:
        raise PreconditionFailed("the residue form needs numeric nodes")
    if not F.is_polynomial:
        raise PreconditionFailed("the residue form needs a polynomial F")
    kernel = UnivariateRational(0, [1], upoly_from_roots(X.nodes), poles=X.nodes)
    return contour_sum(F.coeffs, kernel)


def divided_difference(F, X, form: str = "sum"):
    """Newton's divided difference of F over the nodes X.

    ``form`` selects the symmetric sum, the determinant ratio or the
    residue sum. Symbolic nodes give a RationalFunction.
    """
    F = FunctionValue.coerce(F)
    X = _nodes(X)
    if not len(X):
        raise PreconditionFailed("divided difference over an empty node set")
    if form == "sum":
        return _dd_sum(F, X)
    if form == "det":
        return _dd_det(F, X)
    if form == "residue":
        return _dd_residue(F, X)
    raise ValueError(f"unknown form {form!r}")


def dd_relations_check(F, X, i: int, j: int, k: Optional[int] = None) -> CheckReport:
    """The two-point recurrence for (i, j) and, given k, the three-term relation."""
    F = FunctionValue.coerce(F)
    X = _nodes(X)
    idx = [i, j] + ([k] if k is not None else [])
    if len(set(idx)) != len(idx) or not all(1 <= p <= len(X) for p in idx):
        raise PreconditionFailed("indices must be distinct positions in the node set")
    x = X.elements()
    full = divided_difference(F, X)
    without = {p: divided_difference(F, X.without(p)) for p in idx}
    lhs = full * (x[j - 1] - x[i - 1])
    rec = lhs == without[i] - without[j]
    details = {"recurrence": rec}
    ok = rec
    if k is not None:
        three = 0
        for a, b, c in ((i, j, k), (j, i, k), (k, i, j)):
            three = three + without[a] * _inv((x[a - 1] - x[b - 1]) * (x[a - 1] - x[c - 1]), X, (a, b, c))
        tt = three == 0
        details["three_term"] = tt
        ok = ok and tt
    return CheckReport("dd-relations", ok, details)


def _inv(value, X: NodeSet, abc):
    if X.symbolic:
        a, b, c = (X[p - 1] for p in abc)
        return RationalFunction.inverse_differences([(a, b), (a, c)])
    return 1 / value


# -- Newton and Lagrange -----------------------------------------------------------------


@dataclass
class NewtonSeries:
    terms: List
    remainder: object
    value: object

    @property
    def partial_sum(self):
        s = 0
        for t in self.terms:
            s = s + t
        return s

    @property
    def ok(self):
        return self.partial_sum + self.remainder == self.value


def newton_series(F, X, x) -> NewtonSeries:
    """Terms D_{X_i}[F] R(x, X_{i-1}) and the remainder D_{X_n + x}[F] R(x, X_n)."""
    F = FunctionValue.coerce(F)
    X = _nodes(X)
    if X.symbolic:
        xe = Polynomial.var(int(x))
    else:
        x = Fraction(x)
        xe = x
    if x in X.nodes:
        raise DuplicateNode(f"evaluation point {x} coincides with a node")
    terms = []
    for i in range(1, len(X) + 1):
        terms.append(divided_difference(F, X.prefix(i)) * R_product([xe], X.prefix(i - 1)))
    remainder = divided_difference(F, X.with_node(x)) * R_product([xe], X)
    return NewtonSeries(terms, remainder, F(xe))


def _to_polynomial(coeffs, variable):
    out = Polynomial()
    for k, c in enumerate(coeffs):
        if c:
            out = out + Polynomial.var(variable) ** k * c
    return out


def _numeric_nodes(X) -> NodeSet:
    X = _nodes(X)
    if X.symbolic:
        raise PreconditionFailed("Lagrange interpolation needs numeric nodes")
    if not len(X):
        raise PreconditionFailed("empty node set")
    return X


def lagrange_coeffs(F, X, form: str = "classical") -> List[Fraction]:
    """Coefficients (constant first) of the interpolating polynomial L_F."""
    F = FunctionValue.coerce(F)
    X = _numeric_nodes(X)
    xs = X.nodes
    n = len(xs)

    def basis(i):
        # f(x) / (x - x_i) = prod_{j != i} (x - x_j)
        return upoly_from_roots(xs[:i] + xs[i + 1:])

    out: List[Fraction] = []
    if form == "classical":
        for i, xi in enumerate(xs):
            fp = Fraction(1)
            for j, xj in enumerate(xs):
                if j != i:
                    fp *= xi - xj
            out = upoly_add(out, upoly_scale(basis(i), F(xi) / fp))
    elif form == "permutation":
        values = [F(v) for v in xs]
        bases = [basis(i) for i in range(n)]
        weight = [Fraction(0)] * n
        for alpha in permutations(range(n)):
            d = Fraction(1)
            for a, b in zip(alpha, alpha[1:]):
                d *= xs[a] - xs[b]
            weight[alpha[0]] += 1 / d
        for i in range(n):
            out = upoly_add(out, upoly_scale(bases[i], values[i] * weight[i]))
    else:
        raise ValueError(f"unknown form {form!r}")
    return out


def lagrange(F, X, form: str = "classical", variable: int = 0) -> Polynomial:
    """L_F as a Polynomial in x_variable."""
    return _to_polynomial(lagrange_coeffs(F, X, form), variable)


def lagrange_contour_value(F, X, x) -> Fraction:
    """L_F(x) as the residue sum of (f(z) - f(x))/(z - x) * F(z)/f(z)."""
    F = FunctionValue.coerce(F)
    X = _numeric_nodes(X)
    if not F.is_polynomial:
        raise PreconditionFailed("contour form needs a polynomial F")
    x = Fraction(x)
    f = upoly_from_roots(X.nodes)
    shifted = upoly_add(f, [-upoly_eval(f, x)])
    q, r = upoly_divmod(shifted, [-x, Fraction(1)])
    assert not r
    kernel = UnivariateRational(0, q, f, poles=X.nodes)
    return contour_sum(F.coeffs, kernel)


# -- determinantal identities for bipartite and fence posets ----------------------------------


def _fence_greene(zs, xs, ys) -> Fraction:
    """G(P(Z, X, Y)) at the given values; variables follow the catalog order."""
    P = catalog("fence", len(zs), len(xs))
    vals = {P.vars[i]: Fraction(v) for i, v in enumerate(list(zs) + list(xs) + list(ys))}
    return greene_value(P, vals)


def _distinct(*groups):
    flat = [Fraction(v) for g in groups for v in g]
    if len(set(flat)) != len(flat):
        raise DuplicateNode("node values must be pairwise distinct")
    return [[Fraction(v) for v in g] for g in groups]


def _vandermonde_ratio(rows, zs):
    return det(rows) * _inverse_vandermonde(NodeSet.numeric(zs))


def _T(xs, ys):
    t = Fraction(1)
    for j, y in enumerate(ys):
        t *= (xs[j] - y) * (xs[j + 1] - y)
    return t


def _all_equal(values: Dict) -> bool:
    vals = list(values.values())
    return all(v == vals[0] for v in vals)


def example1_check(k: int, n: int, Z, X) -> CheckReport:
    """Bipartite poset Z_k over X_n: Greene sum against four divided-difference forms."""
    zs, xs = _distinct(Z, X)
    if len(zs) != k or len(xs) != n:
        raise PreconditionFailed("node counts do not match k and n")
    P = catalog("bipartite", k, n)
    G = greene_value(P, {P.vars[i]: v for i, v in enumerate(zs + xs)})
    f = FunctionValue(coeffs=upoly_from_roots(xs))
    h = FunctionValue(coeffs=upoly_from_roots(zs))
    sgn = -1 if k % 2 == 0 else 1  # (-1)^(k-1)
    dd_Z = sgn * divided_difference(lambda t: 1 / f(t), zs)
    dd_X = -sgn * divided_difference(lambda t: 1 / h(t), xs)
    det_ratio = sgn * _vandermonde_ratio([[1 / f(z)] + [z ** (k - 2 - c) for c in range(k - 1)] for z in zs], zs)
    schur_rows = [[z ** (k - 2 - c) * f(z) for c in range(k - 1)] + [Fraction(1)] for z in zs]
    schur = _vandermonde_ratio(schur_rows, zs)
    R = R_product(zs, xs)
    values = {"G": G, "dd_Z": dd_Z, "dd_X": dd_X, "det_ratio": det_ratio, "schur_ratio": schur / R}
    schur_ok = R * G == schur
    ok = _all_equal(values) and schur_ok
    return CheckReport("example1", ok, dict(values, multi_schur=schur, R_times_G_matches=schur_ok))


def example3_check(k: int, n: int, Z, X, Y) -> CheckReport:
    """Fence poset P(Z_k, X_n, Y_{n-1}) against the g/f divided-difference forms."""
    zs, xs, ys = _distinct(Z, X, Y)
    if len(zs) != k or len(xs) != n or len(ys) != n - 1:
        raise PreconditionFailed("node counts do not match k, n and n - 1")
    G = _fence_greene(zs, xs, ys)
    f = FunctionValue(coeffs=upoly_from_roots(xs))
    g = FunctionValue(coeffs=upoly_from_roots(ys))
    T = _T(xs, ys)
    sgn = -1 if k % 2 == 0 else 1

    def phi(t):
        return g(t) / f(t)

    dd = sgn * divided_difference(phi, zs) / T
    det_ratio = sgn * _vandermonde_ratio([[phi(z)] + [z ** (k - 2 - c) for c in range(k - 1)] for z in zs], zs) / T
    rows = [[z ** (k - 2 - c) * f(z) for c in range(k - 1)] + [g(z)] for z in zs]
    fg_ratio = _vandermonde_ratio(rows, zs) / (R_product(zs, xs) * T)
    values = {"G": G, "dd": dd, "det_ratio": det_ratio, "fg_ratio": fg_ratio}
    ok = _all_equal(values)
    details = dict(values)

    # partial fractions of g/f at z_1
    z1 = zs[0]
    pf = Fraction(0)
    for i, xi in enumerate(xs):
        fp = Fraction(1)
        for j, xj in enumerate(xs):
            if j != i:
                fp *= xi - xj
        pf += g(xi) / ((z1 - xi) * fp)
    details["partial_fractions"] = pf == phi(z1)
    ok = ok and details["partial_fractions"]

    if k == 1:
        # splitting L(P) by which x comes right after z_1
        P = catalog("fence", 1, n)
        vals = {P.vars[i]: v for i, v in enumerate(zs + xs + ys)}
        xid = [P.id(f"x{i}") for i in range(1, n + 1)]
        parts = Fraction(0)
        for i in xid:
            Q = add_relations(P, [(j, i) for j in xid if j != i])
            parts += greene_value(Q, vals)
        details["split_by_second_element"] = parts == G
        ok = ok and details["split_by_second_element"]
    return CheckReport("example3", ok, details)


def prop2_check(p: int, k: int, n: int, Z, X, Y) -> CheckReport:
    """Four expressions for the Lagrange-Sylvester symmetrizer applied to prod g/f."""
    zs, xs, ys = _distinct(Z, X, Y)
    if len(zs) != k or len(xs) != n or len(ys) != n - 1:
        raise PreconditionFailed("node counts do not match k, n and n - 1")
    if not 1 <= p <= k:
        raise PreconditionFailed("need 1 <= p <= k")
    f = FunctionValue(coeffs=upoly_from_roots(xs))
    g = FunctionValue(coeffs=upoly_from_roots(ys))
    phi = {z: g(z) / f(z) for z in zs}

    rows = [[z ** (p - 1 - c) * phi[z] for c in range(p)] + [z ** (k - p - 1 - c) for c in range(k - p)]
            for z in zs]
    e2 = _vandermonde_ratio(rows, zs)

    e3 = Fraction(0)
    for I in combinations(range(k), p):
        rest = [zs[j] for j in range(k) if j not in I]
        num = Fraction(1)
        for j in I:
            num *= phi[zs[j]]
        e3 += num / R_product([zs[j] for j in I], rest)

    Zn = NodeSet.numeric(zs)

    def band_dd(i, j):
        if i > j:
            return Fraction(0)
        return divided_difference(lambda t: phi[t], Zn.band(i, j))

    def band_G(i, j):
        if i > j:
            return Fraction(0)
        s = -1 if (j - i) % 2 else 1
        return s * _fence_greene(zs[i - 1:j], xs, ys)

    cols = [k - p + m for m in range(1, p + 1)]
    e4 = det([[band_dd(i, j) for j in cols] for i in range(1, p + 1)])
    e5 = _T(xs, ys) ** p * det([[band_G(i, j) for j in cols] for i in range(1, p + 1)])
    values = {"(2)": e2, "(3)": e3, "(4)": e4, "(5)": e5}
    return CheckReport("prop2", _all_equal(values), values)


def prop3_expand(H, p: int, nodes, t_values, truncation: Optional[int] = None) -> CheckReport:
    """Generalized Newton series of prod_i H(t_i) via Binet-Cauchy.

    One node family z_1, z_2, ... serves both as the bands Z_{i,j} of the
    coefficient minors and as the prefixes X_{j-1} of the basis minors.
    """
    H = FunctionValue.coerce(H)
    Zn = _nodes(nodes)
    ts = _distinct(t_values)[0]
    if len(ts) != p or p < 1:
        raise PreconditionFailed("need exactly p >= 1 evaluation points")
    if truncation is None:
        if not H.is_polynomial:
            raise TruncationRequired("non-polynomial H needs an explicit truncation order")
        truncation = max(H.degree(), 0) + p
    N = truncation
    if len(Zn) < N:
        raise PreconditionFailed(f"need at least {N} nodes for truncation {N}")

    coef = [[divided_difference(H, Zn.band(i, j)) if i <= j else Fraction(0)
             for j in range(1, N + 1)] for i in range(1, p + 1)]
    basis = [[R_product([t], Zn.prefix(j - 1)) for j in range(1, N + 1)] for t in ts]
    vand = det([[t ** m for m in range(p)] for t in ts])

    rhs = Fraction(0)
    nterms = 0
    for J in combinations(range(N), p):
        a = det([[coef[i][j] for j in J] for i in range(p)])
        if a:
            nterms += 1
            rhs += a * det([[basis[i][j] for j in J] for i in range(p)]) / vand
    lhs = Fraction(1)
    for t in ts:
        lhs *= H(t)
    details = {"lhs": lhs, "rhs": rhs, "truncation": N, "nonzero_terms": nterms}
    if H.is_polynomial:
        details["exact_expected"] = N >= max(H.degree(), 0) + p
    return CheckReport("prop3", lhs == rhs, details)
