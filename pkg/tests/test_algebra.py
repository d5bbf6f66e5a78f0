from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from greenesums.algebra import (
    Polynomial,
    RationalFunction,
    UnivariateRational,
    contour_sum,
    det,
    poly_arith,
    poly_exact_div,
    residue,
    rf_reduce,
    rf_specialize,
)
from greenesums.errors import NotDivisible, PoleCollision
from greenesums.greene import greene_brute, nd_structure
from greenesums.poset import catalog

x = Polynomial.var
d = Polynomial.diff


def test_difference_of_squares():
    assert poly_arith(d(1, 2), x(1) + x(2), "mul") == x(1) ** 2 - x(2) ** 2


def test_add_zero():
    p = x(1) * 3 - x(2) ** 2
    assert poly_arith(p, Polynomial(), "add") == p


def test_vandermonde_product_value():
    p = d(1, 2) * d(2, 3) * d(1, 3)
    assert p.evaluate({1: 3, 2: 2, 3: 1}) == 2


def test_exact_division():
    assert poly_exact_div(x(1) ** 2 - x(2) ** 2, d(1, 2)) == x(1) + x(2)
    with pytest.raises(NotDivisible):
        poly_exact_div(d(1, 2), d(1, 3))


def test_nd_roundtrip_on_diamond():
    P = catalog("diamond")
    nd = nd_structure(P)
    D = Polynomial.const(1)
    for hi, lo, e in nd.D:
        D = D * d(hi, lo) ** e
    assert poly_exact_div(nd.N * D, D) == nd.N


def test_reduce_cancels_factor():
    r = RationalFunction(d(1, 2), {(1, 2): 1, (1, 3): 1})
    assert r == RationalFunction.inverse_differences([(1, 3)])
    assert r.num == Polynomial.const(1)
    assert rf_reduce(r) == r


def test_v_poset_terms_reduce():
    z, x1, x2 = 0, 1, 2
    a = RationalFunction.inverse_differences([(z, x1), (x1, x2)])
    b = RationalFunction.inverse_differences([(z, x2), (x2, x1)])
    assert a + b == RationalFunction.inverse_differences([(z, x1), (z, x2)])


def test_sign_goes_to_numerator():
    r = RationalFunction.inverse_differences([(3, 1)])
    assert r.den == {(1, 3): 1}
    assert r.evaluate({1: 0, 3: 1}) == 1


def test_specialize():
    r = RationalFunction.inverse_differences([(0, 1), (0, 2)])
    u = rf_specialize(r, {1: 0, 2: 1}, 0)
    assert u == UnivariateRational(0, [1], [0, -1, 1])
    five = rf_specialize(RationalFunction(5), {1: 7}, 0)
    assert five(Fraction(11)) == 5


def test_specialize_pole_collision():
    r = RationalFunction.inverse_differences([(1, 2), (0, 1)])
    with pytest.raises(PoleCollision):
        rf_specialize(r, {1: 4, 2: 4}, 0)


def test_diamond_spot_value():
    P = catalog("diamond")  # z=0, x1=1, x2=2, t=3
    g = greene_brute(P).value
    assert g.evaluate({0: 3, 1: 1, 2: 0, 3: -5}) == Fraction(2, 45)
    assert Fraction(1, 10) - Fraction(1, 18) == Fraction(2, 45)
    u = rf_specialize(g, {1: 1, 2: 0, 3: -5}, 0)
    assert u(3) == Fraction(2, 45)


def test_residues():
    u = UnivariateRational(0, [1], [0, -1, 1])  # 1/(z(z-1))
    assert residue(u, 0) == -1
    assert residue(UnivariateRational(0, [1], [1, -2, 1]), 1) == 0
    w = UnivariateRational(0, [0, 0, 1], [2, -3, 1])  # z^2/((z-1)(z-2))
    assert residue(w, 2) == 4
    assert residue(w, 5) == 0


def test_contour_sums():
    k = UnivariateRational(0, [1], [0, -1, 1])
    assert contour_sum([1], k) == 0
    assert contour_sum([0, 1], k) == 1
    assert contour_sum([1], UnivariateRational(0, [1], [-7, 1])) == 1


def test_higher_order_residue():
    # 1/(z-1)^3 * 1/(z-2): residue at 1 is -1, at 2 is 1
    u = UnivariateRational(0, [1], [-1, 3, -3, 1]) * UnivariateRational(0, [1], [-2, 1])
    assert residue(u, 1) == -1
    assert residue(u, 2) == 1


def test_determinants():
    I3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert det(I3) == 1
    assert det([[t * t, t, 1] for t in (3, 2, 1)]) == 2
    assert det([[1, 2, 3], [4, 5, 6], [1, 2, 3]]) == 0


def test_polynomial_determinant():
    rows = [[x(i) ** 2, x(i), Polynomial.const(1)] for i in (1, 2, 3)]
    assert det(rows) == d(1, 2) * d(1, 3) * d(2, 3)


def test_canonical_text():
    g = greene_brute(catalog("star", 2)).value
    assert g.format({0: "z", 1: "x1", 2: "x2"}) == "1/((z - x1)*(z - x2))"


# -- properties ------------------------------------------------------------------------

small = st.integers(-6, 6)


@st.composite
def rational_functions(draw):
    nv = 4
    terms = {}
    for _ in range(draw(st.integers(1, 4))):
        m = tuple(draw(st.integers(0, 2)) for _ in range(nv))
        terms[m] = draw(small)
    pairs = [(a, b) for a in range(nv) for b in range(a + 1, nv)]
    den = {p: draw(st.integers(0, 2)) for p in draw(st.lists(st.sampled_from(pairs), max_size=3))}
    num = Polynomial(terms)
    # multiply in a factor sometimes so reduction has something to cancel
    if draw(st.booleans()) and den:
        num = num * d(*next(iter(den)))
    return RationalFunction(num, den, reduce=False)


distinct_values = st.lists(st.fractions(min_value=-20, max_value=20, max_denominator=5),
                           min_size=4, max_size=4, unique=True)


@settings(max_examples=60, deadline=None)
@given(rational_functions(), distinct_values)
def test_reduce_preserves_value(r, vals):
    assign = dict(enumerate(vals))
    red = rf_reduce(r)
    assert rf_reduce(red) == red
    for f in red.den:
        assert not red.num.divides_linear(*f)
    assert red.evaluate(assign) == r.evaluate(assign)
    keep = 0
    rest = {v: a for v, a in assign.items() if v != keep}
    assert rf_specialize(red, rest, keep)(vals[0]) == r.evaluate(assign)


def _random_univariate(draw, poles):
    num = [draw(small) for _ in range(draw(st.integers(1, 3)))]
    den = [Fraction(1)]
    for p in poles:
        den = [a - p * b for a, b in zip([Fraction(0)] + den, den + [Fraction(0)])]
    return UnivariateRational(0, num, den, poles=poles)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_residue_linear_and_closed_contour(data):
    poles = data.draw(st.lists(st.integers(-5, 5), min_size=1, max_size=4))
    u = _random_univariate(data.draw, poles)
    v = _random_univariate(data.draw, poles)
    a, b = data.draw(small), data.draw(small)
    for p in set(poles):
        assert residue(u * a + v * b, p) == a * residue(u, p) + b * residue(v, p)
    if u.is_proper_for_contour():
        assert contour_sum([1], u) == 0


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(small, min_size=4, max_size=4), min_size=4, max_size=4), st.integers(0, 3),
       st.integers(0, 3))
def test_det_alternating(m, i, j):
    dup = [list(r) for r in m]
    dup[j] = list(dup[i])
    if i != j:
        assert det(dup) == 0
        swapped = [list(r) for r in m]
        swapped[i], swapped[j] = swapped[j], swapped[i]
        assert det(swapped) == -det(m)
