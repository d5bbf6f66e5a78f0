import random
from itertools import permutations

import pytest

from greenesums.algebra import RationalFunction
from greenesums.errors import EqualIndices, LabelingNotExtension, SizeExceeded
from greenesums.forms import (
    WedgeForm,
    alternating_omit_form,
    arnold_relation_check,
    d_difference,
    omega,
    relabel_to_extension,
    signed_extension_identity_check,
    signed_extension_sum,
    signed_extension_sum_literal,
    three_element_posets,
    wedge,
    wedge_all,
)
from greenesums.poset import build_poset, catalog, is_linear_extension, random_poset

inv = RationalFunction.inverse_differences


def test_omega_definition():
    w = omega(1, 2)
    assert w.degree == 1
    assert w.coeffs == {(1,): inv([(1, 2)]), (2,): -inv([(1, 2)])}
    with pytest.raises(EqualIndices):
        omega(3, 3)


def test_omega_is_symmetric():
    # d(x2 - x1)/(x2 - x1) is the same form as d(x1 - x2)/(x1 - x2)
    assert omega(2, 1) == omega(1, 2)
    assert not (omega(2, 1) + omega(1, 2)).is_zero()
    assert (omega(2, 1) - omega(1, 2)).is_zero()


def test_nilpotent():
    assert wedge(omega(1, 2), omega(1, 2)).is_zero()


def test_basic_wedges():
    assert wedge(WedgeForm.dx(1), WedgeForm.dx(2)) == WedgeForm(2, {(1, 2): 1})
    assert wedge(WedgeForm.dx(2), WedgeForm.dx(1)) == WedgeForm(2, {(1, 2): -1})
    expected = WedgeForm(2, {(1, 2): 1, (1, 3): -1, (2, 3): 1})
    assert wedge(d_difference(1, 2), d_difference(2, 3)) == expected


def _random_form(rng, degree, nv=5):
    coeffs = {}
    for _ in range(rng.randint(1, 3)):
        S = tuple(sorted(rng.sample(range(nv), degree)))
        a, b = rng.sample(range(nv), 2)
        coeffs[S] = inv([(a, b)]) * rng.randint(-3, 3)
    return WedgeForm(degree, coeffs)


def test_graded_anticommutative():
    rng = random.Random(2)
    for _ in range(30):
        p, q = rng.randint(0, 2), rng.randint(0, 2)
        a, b = _random_form(rng, p), _random_form(rng, q)
        ab = wedge(a, b)
        assert wedge(b, a) == (ab if (p * q) % 2 == 0 else -ab)


def test_arnold():
    assert arnold_relation_check(1, 2, 3).ok
    assert arnold_relation_check(2, 3, 1).ok
    rng = random.Random(0)
    assert arnold_relation_check(*rng.sample(range(6), 3)).ok


def test_transposition_flips_sign():
    rng = random.Random(4)
    for _ in range(30):
        n = rng.randint(2, 6)
        alpha = list(range(n))
        rng.shuffle(alpha)
        i, j = rng.sample(range(n), 2)
        beta = list(alpha)
        beta[i], beta[j] = beta[j], beta[i]
        fa = wedge_all(d_difference(a, b) for a, b in zip(alpha, alpha[1:]))
        fb = wedge_all(d_difference(a, b) for a, b in zip(beta, beta[1:]))
        assert fb == -fa


def test_consecutive_differences_give_alternating_form():
    for n in range(2, 6):
        f = wedge_all(d_difference(a, a + 1) for a in range(n - 1))
        assert f == alternating_omit_form(range(n))


def test_chain_identity():
    C = catalog("chain", 3)
    r = signed_extension_identity_check(C)
    assert r.ok
    single = wedge(omega(0, 1), omega(1, 2))
    assert signed_extension_sum(C) == single


def test_v_poset_identity():
    V = catalog("star", 2)
    lhs = signed_extension_sum(V)
    rhs = alternating_omit_form([0, 1, 2]).scale(inv([(0, 1), (0, 2)]))
    assert lhs == rhs
    assert signed_extension_identity_check(V, literal=True).ok


def test_three_element_posets():
    ps = three_element_posets()
    assert len(ps) == 6
    for P in ps:
        assert signed_extension_identity_check(P).ok
        assert signed_extension_identity_check(P, literal=True).ok


def test_dp_matches_literal():
    rng = random.Random(7)
    for _ in range(10):
        P = relabel_to_extension(random_poset(rng.getrandbits(32), rng.randint(1, 5), 0.4))
        assert signed_extension_sum(P) == signed_extension_sum_literal(P)


def test_labeling_must_be_extension():
    P = build_poset([("a", 0), ("b", 1)], [("b", "a")])
    assert signed_extension_identity_check(P).ok
    Q = build_poset([("a", 0), ("b", 1)], [("a", "b")])
    with pytest.raises(LabelingNotExtension):
        signed_extension_identity_check(Q)
    R = relabel_to_extension(Q)
    by_label = sorted(range(R.n), key=lambda e: R.vars[e])
    assert is_linear_extension(R, by_label)
    assert signed_extension_identity_check(R).ok


def test_size_limit():
    with pytest.raises(SizeExceeded):
        signed_extension_identity_check(catalog("chain", 8))
