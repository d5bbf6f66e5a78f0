import random
from fractions import Fraction

import pytest

from greenesums.algebra import det
from greenesums.errors import CycleDetected, NotCoverEdge, NotIncomparable, SizeExceeded
from greenesums.poset import (
    add_relations,
    build_poset,
    catalog,
    contract_edge,
    count_linear_extensions,
    cycle_rank,
    disjoint_union,
    format_poset_text,
    is_connected,
    is_linear_extension,
    linear_extensions,
    mobius,
    parse_poset_text,
    random_poset,
    separating_subsets,
)


def names(P, ids):
    return {P.names[i] for i in ids}


def covers(P):
    return {(P.names[a], P.names[b]) for a, b in P.covers}


def V():
    return build_poset(["z", "x1", "x2"], [("x1", "z"), ("x2", "z")])


def test_build():
    assert covers(V()) == {("x1", "z"), ("x2", "z")}
    P = build_poset("abc", [("a", "b"), ("b", "c"), ("a", "c")])
    assert covers(P) == {("a", "b"), ("b", "c")}
    assert P.lt("a", "c")
    with pytest.raises(CycleDetected):
        build_poset("ab", [("a", "b"), ("b", "a")])


def test_add_relations():
    A = build_poset(["z1", "z2"])
    assert covers(add_relations(A, [("z1", "z2")])) == {("z1", "z2")}
    Q = add_relations(V(), [("x1", "x2")])
    assert covers(Q) == {("x1", "x2"), ("x2", "z")}
    assert Q.lt("x1", "z")
    with pytest.raises(NotIncomparable):
        add_relations(catalog("chain", 2), [("x2", "x1")])


def test_mobius_small():
    P = catalog("chain", 2)
    assert mobius(P, "x1", "x1") == 1
    assert mobius(P, "x2", "x1") == -1
    D = catalog("diamond")
    assert mobius(D, "t", "z") == 1
    assert mobius(D, "x1", "z") == -1


def test_mobius_against_zeta_inverse():
    rng = random.Random(5)
    for _ in range(25):
        P = random_poset(rng.getrandbits(32), rng.randint(1, 7), 0.4)
        n = P.n
        zeta = [[Fraction(1 if a == b or P.lt(a, b) else 0) for b in range(n)] for a in range(n)]
        M = [[Fraction(mobius(P, a, b)) if a == b or P.lt(a, b) else Fraction(0) for b in range(n)] for a in range(n)]
        prod = [[sum(zeta[a][c] * M[c][b] for c in range(n)) for b in range(n)] for a in range(n)]
        assert prod == [[Fraction(int(a == b)) for b in range(n)] for a in range(n)]
        assert det(zeta) == 1


def test_extensions():
    assert len(linear_extensions(catalog("antichain", 3))) == 6
    assert len(linear_extensions(catalog("chain", 3))) == 1
    P = V()
    words = [tuple(P.names[e] for e in w) for w in linear_extensions(P)]
    assert words == [("z", "x1", "x2"), ("z", "x2", "x1")]


def test_extension_order_and_counts():
    rng = random.Random(11)
    for _ in range(30):
        P = random_poset(rng.getrandbits(32), rng.randint(1, 7), 0.3)
        ws = linear_extensions(P)
        assert len(ws) == len(set(ws)) == count_linear_extensions(P)
        for w in ws:
            pos = {e: i for i, e in enumerate(w)}
            assert all(pos[b] < pos[a] for a, b in P.relations())
            assert is_linear_extension(P, w)
    assert len(linear_extensions(catalog("antichain", 5))) == 120


def test_extension_size_bound():
    with pytest.raises(SizeExceeded):
        linear_extensions(catalog("chain", 11))
    assert len(linear_extensions(catalog("chain", 11), max_elems=None)) == 1


def test_separators():
    C = catalog("chain", 3)
    assert [names(C, s.members) for s in separating_subsets(C)] == [{"x1"}, {"x2"}, {"x3"}]
    seps = [names(V(), s.members) for s in separating_subsets(V())]
    assert seps == [{"z"}, {"x1", "x2"}]
    two = disjoint_union(catalog("chain", 2), catalog("chain", 2))
    assert separating_subsets(two) == []


def test_separator_invariants():
    rng = random.Random(3)
    for _ in range(30):
        P = random_poset(rng.getrandbits(32), rng.randint(1, 7), 0.5)
        for s in separating_subsets(P):
            for a in s.members:
                assert all(not P.comparable(a, b) for b in s.members if b != a)
                assert all(P.lt(b, a) for b in s.below)
                assert all(P.lt(a, b) for b in s.above)
            assert sorted(s.members + s.below + s.above) == list(range(P.n))


def test_connectivity_and_rank():
    A = catalog("antichain", 2)
    assert not is_connected(A) and cycle_rank(A) == 0
    D = catalog("diamond")
    assert is_connected(D) and cycle_rank(D) == 1
    assert cycle_rank(catalog("star", 4)) == 0


def test_contract_edge():
    P = contract_edge(catalog("chain", 2), "x2", "x1")
    assert P.n == 1 and P.names == ("x2",)
    Q = contract_edge(catalog("diamond"), "t", "x1")
    # merged element keeps t's name; it sits below x2 because t did
    assert covers(Q) == {("t", "x2"), ("x2", "z")}
    assert Q.lt("t", "z")
    with pytest.raises(NotCoverEdge):
        contract_edge(catalog("chain", 3), "x3", "x1")


def test_contraction_keeps_connectivity():
    rng = random.Random(8)
    for _ in range(30):
        P = random_poset(rng.getrandbits(32), rng.randint(2, 7), 0.5)
        if not is_connected(P):
            continue
        for a, b in P.covers:
            assert is_connected(contract_edge(P, a, b))


def test_catalog():
    F = catalog("fence", 1, 2)
    assert F.n == 4
    assert covers(F) == {("x1", "z1"), ("x2", "z1"), ("y1", "x1"), ("y1", "x2")}
    assert catalog("chain", 1).n == 1
    B = catalog("bipartite", 2, 2)
    assert covers(B) == {(x, z) for x in ("x1", "x2") for z in ("z1", "z2")}
    assert list(F.vars) == [0, 1, 2, 3]


def test_random_poset():
    assert random_poset(1, 1, 0.7).n == 1
    A = random_poset(42, 5, 0.0)
    assert not A.covers and A.n == 5
    assert random_poset(9, 6, 0.4) == random_poset(9, 6, 0.4)
    with pytest.raises(SizeExceeded):
        random_poset(1, 11, 0.5)


def test_text_roundtrip():
    text = "elem a\nelem b  # comment\nrel a < b\n"
    P = parse_poset_text(text)
    assert covers(P) == {("a", "b")}
    assert parse_poset_text(format_poset_text(P)) == P
    F = catalog("fence", 1, 3)
    assert parse_poset_text(format_poset_text(F)).key == F.key
