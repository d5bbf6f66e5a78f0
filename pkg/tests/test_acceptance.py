"""Acceptance checks. Every comparison is exact; runtimes are bounded per criterion."""
import io
import random
import time
from fractions import Fraction
from itertools import permutations

import pytest

from greenesums import cli, forms, greene, interp, series
from greenesums.errors import DivisionByZero, PoleAtX, PreconditionFailed
from greenesums.poset import (
    catalog,
    catalog_planar,
    cycle_rank,
    is_connected,
    ordinal_sum,
    random_poset,
    separating_subsets,
)

crit = pytest.mark.criterion


def distinct(rng, m, spread=50):
    out = []
    while len(out) < m:
        v = Fraction(rng.randint(-spread, spread), rng.randint(1, 4))
        if v not in out:
            out.append(v)
    return out


def connected(rng, lo, hi, density=0.45):
    while True:
        P = random_poset(rng.getrandbits(32), rng.randint(lo, hi), density)
        if is_connected(P):
            return P


class Clock:
    def __init__(self, limit):
        self.limit = limit

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0
        if exc[0] is None:
            assert self.elapsed <= self.limit, f"took {self.elapsed:.1f}s, limit {self.limit}s"


# -- 1 ------------------------------------------------------------------------------------

PLANAR_FAMILIES = ([("chain", (n,)) for n in range(1, 7)] + [("star", (n,)) for n in range(1, 7)]
                   + [("diamond", ())] + [("fence", (1, n)) for n in range(1, 5)]
                   + [("bipartite", (k, n)) for k in range(1, 4) for n in range(1, 4)])


def product_mismatches(families):
    bad = []
    for kind, args in families:
        P = catalog(kind, *args)
        if greene.greene_product(P).value != greene.greene_brute(P).value:
            bad.append((kind, args))
    return bad


@crit(1)
def test_criterion_1_engines_agree():
    with Clock(60):
        planar = [(k, a) for k, a in PLANAR_FAMILIES
                  if catalog_planar(k, **dict(zip(("k", "n") if k in ("bipartite", "fence") else ("n",), a)))]
        assert len(planar) == 22
        assert product_mismatches(planar) == []

        used = {p: 0 for p in (1, 2, 3, 4, 5)}
        rng = random.Random(1001)
        for _ in range(100):
            P = cli._separated_poset(rng)
            assert P.n <= 8
            g = greene.greene_brute(P).value
            assert greene.greene_recursive(P).value == g
            for Z in separating_subsets(P):
                for part in used:
                    try:
                        r = greene.prop1_reduce(P, Z, part)
                    except PreconditionFailed:
                        continue
                    assert r.value == g, (P, Z, part)
                    used[part] += 1
        assert all(used.values()), used


@crit(1)
@pytest.mark.xfail(strict=True, reason="product formula is stated for planar posets; bipartite k,n >= 2 is not planar")
def test_criterion_1_product_on_nonplanar_bipartite():
    nonplanar = [("bipartite", (k, n)) for k in (2, 3) for n in (2, 3)]
    assert product_mismatches(nonplanar) == []


# -- 2 ------------------------------------------------------------------------------------


@crit(2)
def test_criterion_2_binomial_and_determinant_forms():
    with Clock(30):
        rng = random.Random(2002)
        for k in (4, 5):
            P = ordinal_sum(catalog("chain", 1), catalog("antichain", k), catalog("chain", 1))
            Z = [s for s in separating_subsets(P) if s.k == k][0]
            assert len(Z.below) == len(Z.above) == 1
            G = greene.greene_brute(P).value
            for _ in range(10):
                vals = dict(zip(P.vars, distinct(rng, P.n)))
                ctx = greene.separator_context(P, Z, vals)
                b = greene.prop1_part5_binomial(ctx)
                d = greene.prop1_part5_determinant(ctx)
                assert b == d == G.evaluate(vals)


# -- 3 ------------------------------------------------------------------------------------


@crit(3)
def test_criterion_3_structure_facts():
    rng = random.Random(3003)
    trees = cycles = 0
    for _ in range(100):
        P = connected(rng, 1, 7)
        s = greene.nd_structure(P)
        assert s.report.ok, s.report.details
        assert s.report.details["D_equals_cover_differences"]
        assert s.N.total_degree() == cycle_rank(P)
        assert (s.N.is_constant() and s.N.constant_value() in (1, -1)) == (cycle_rank(P) == 0)
        trees += cycle_rank(P) == 0
        cycles += cycle_rank(P) > 0
    assert trees and cycles
    seen = 0
    while seen < 100:
        P = random_poset(rng.getrandbits(32), rng.randint(2, 7), 0.25)
        if is_connected(P):
            continue
        seen += 1
        assert greene.greene_brute(P).value.is_zero()
        assert greene.greene_recursive(P).value.is_zero()


# -- 4 ------------------------------------------------------------------------------------


@crit(4)
def test_criterion_4_contraction_and_partition():
    rng = random.Random(4004)
    for _ in range(100):
        P = connected(rng, 2, 7)
        a, b = rng.choice(sorted(P.covers))
        assert greene.contraction_law_check(P, a, b).ok
    done = 0
    while done < 100:
        P = random_poset(rng.getrandbits(32), rng.randint(2, 7), 0.35)
        pairs = [(a, b) for a in range(P.n) for b in range(a + 1, P.n) if not P.comparable(a, b)]
        if not pairs:
            continue
        assert greene.partition_identity_check(P, *rng.choice(pairs)).ok
        done += 1


# -- 5 ------------------------------------------------------------------------------------


@crit(5)
def test_criterion_5_divided_differences():
    rng = random.Random(5005)
    for _ in range(100):
        n = rng.randint(1, 6)
        nodes = distinct(rng, n)
        F = [rng.randint(-9, 9) for _ in range(rng.randint(1, 6))]
        a, b, c = (interp.divided_difference(F, nodes, f) for f in ("sum", "det", "residue"))
        assert a == b == c
    for y in (0, 3, Fraction(-5, 2)):
        for form in ("sum", "det", "residue"):
            assert interp.divided_difference([-y, 1], distinct(rng, 3), form) == 0
    for n in range(1, 7):
        for form in ("sum", "det", "residue"):
            assert interp.divided_difference([0] * (n - 1) + [1], distinct(rng, n), form) == 1


# -- 6 ------------------------------------------------------------------------------------


@crit(6)
def test_criterion_6_interpolation():
    with Clock(60):
        rng = random.Random(6006)
        for _ in range(50):
            n = rng.randint(1, 6)
            pts = distinct(rng, n + 1)
            F = [rng.randint(-9, 9) for _ in range(rng.randint(1, 9))]
            assert interp.newton_series(F, pts[:n], pts[n]).ok
        for n in range(1, 7):
            for _ in range(3):
                nodes = distinct(rng, n)
                F = [rng.randint(-9, 9) for _ in range(rng.randint(1, 9))]
                assert interp.lagrange(F, nodes) == interp.lagrange(F, nodes, "permutation")
        for k in range(1, 5):
            for n in range(1, 5):
                for _ in range(3):
                    v = distinct(rng, k + n)
                    assert interp.example1_check(k, n, v[:k], v[k:]).ok
        for k in (1, 2):
            for n in (1, 2, 3):
                for _ in range(3):
                    v = distinct(rng, k + 2 * n - 1)
                    assert interp.example3_check(k, n, v[:k], v[k:k + n], v[k + n:]).ok
        for k in range(1, 5):
            for p in range(1, k + 1):
                for n in range(1, 4):
                    for _ in range(20):
                        v = distinct(rng, k + 2 * n - 1)
                        r = interp.prop2_check(p, k, n, v[:k], v[k:k + n], v[k + n:])
                        assert r.ok, r.details
        for deg in range(4):
            for p in range(1, 4):
                for _ in range(3):
                    H = [rng.randint(-5, 5) for _ in range(deg)] + [rng.randint(1, 5)]
                    N = deg + p
                    v = distinct(rng, N + p)
                    assert interp.prop3_expand(H, p, v[:N], v[N:]).ok


# -- 7 ------------------------------------------------------------------------------------


def catalog_marked():
    posets = [catalog("chain", n) for n in range(2, 7)] + [catalog("star", n) for n in range(1, 7)]
    posets += [catalog("diamond")] + [catalog("fence", k, n) for k in (1, 2) for n in range(1, 5) if k + 2 * n <= 9]
    posets += [catalog("bipartite", k, n) for k in range(1, 4) for n in range(1, 4)]
    posets += [catalog("triple", 1, 2, 1), catalog("triple", 2, 2, 1)]
    for P in posets:
        for a, b in sorted(P.covers):
            yield series.MarkedPoset(P, a, b)


@crit(7)
def test_criterion_7_series():
    with Clock(60):
        count = 0
        for mp in catalog_marked():
            assert series.split_greene(mp).recombination_ok()
            count += 1
        assert count > 100

        rng = random.Random(7007)
        done = 0
        while done < 100:
            P = connected(rng, 2, 6)
            x, z = rng.choice(sorted(P.covers))
            mp = series.MarkedPoset(P, x, z)
            try:
                r = series.recursion_step_check(mp, dict(zip(P.vars, distinct(rng, P.n))))
            except DivisionByZero:
                continue
            assert r.ok
            done += 1

        for n in range(2, 7):
            for _ in range(4):
                v = distinct(rng, n + 1)
                F = [rng.randint(-5, 5) for _ in range(rng.randint(1, n))]
                r = series.triangle_newton_check(F, v[:n], v[n])
                assert r.ok, r.details
        for _ in range(15):
            ms = [rng.randint(1, 3) for _ in range(rng.randint(2, 4))]
            seq = series.star_sequence(ms)
            fv = seq.free_variables()
            v = distinct(rng, len(fv) + 1)
            F = [rng.randint(-5, 5) for _ in range(rng.randint(1, 3))]
            assert series.prop4_expand(seq, F, len(ms), dict(zip(fv, v)), v[-1]).report.ok

        kinds = {"star": 0, "fence": 0, "diamond": 0}
        lagrange_checked = 0
        i = 0
        while min(kinds.values()) < 17:
            i += 1
            kind = ("star", "fence", "diamond")[i % 3]
            if kind == "star":
                P, z = catalog("star", rng.randint(1, 5)), "z"
            elif kind == "fence":
                P = catalog("fence", rng.randint(1, 2), rng.randint(1, 3))
                z = P.names[rng.randrange(P.n)]
            else:
                P, z = catalog("diamond"), rng.choice(["z", "x1", "x2", "t"])
            v = distinct(rng, P.n + 1)
            F = [rng.randint(-5, 5) for _ in range(rng.randint(1, 4))]
            try:
                e = series.prop5_expand(P, z, F, dict(zip(P.vars, v)), v[-1])
            except PoleAtX:
                continue
            assert e.report.ok, e.report.details
            if kind == "star":
                assert e.report.details["lagrange_matches"]
                lagrange_checked += 1
            kinds[kind] += 1
        assert sum(kinds.values()) >= 50 and lagrange_checked >= 17


# -- 8 ------------------------------------------------------------------------------------


@crit(8)
def test_criterion_8_forms():
    with Clock(60):
        for t in permutations(range(6), 3):
            assert forms.arnold_relation_check(*t).ok
        three = forms.three_element_posets()
        assert len(three) == 6
        for P in three:
            assert forms.signed_extension_identity_check(P).ok
        full = ([catalog("chain", n) for n in range(1, 7)] + [catalog("antichain", n) for n in range(1, 7)]
                + [catalog("star", n) for n in range(1, 7)] + [catalog("diamond")]
                + [catalog("fence", 1, n) for n in range(1, 4)] + [catalog("fence", 2, 2)]
                + [catalog("bipartite", k, n) for k in range(1, 4) for n in range(1, 4) if k + n <= 7]
                + [catalog("triple", 1, 2, 1), catalog("triple", 2, 2, 2)])
        for P in full:
            assert forms.signed_extension_identity_check(P).ok, P
        rng = random.Random(8008)
        for _ in range(50):
            P = forms.relabel_to_extension(random_poset(rng.getrandbits(32), rng.randint(1, 6), 0.4))
            assert forms.signed_extension_identity_check(P).ok


# -- 9 ------------------------------------------------------------------------------------


def run_cli(args):
    buf = io.StringIO()
    code = cli.run(cli.config_from_args(args), buf)
    return code, buf.getvalue()


@crit(9)
def test_criterion_9_determinism():
    for identity in ("greene-formula", "prop5", "arnold"):
        args = ["verify", identity, "--seed", "99", "--trials", "15", "--format", "kv"]
        first, second = run_cli(args), run_cli(args)
        assert first[0] == 0
        assert first[1].encode() == second[1].encode()


@crit(9)
def test_criterion_9_planted_sign_flip(monkeypatch):
    real = greene.greene_product
    monkeypatch.setattr(greene, "greene_product",
                        lambda P: greene.GreeneResult(-real(P).value, "product"))
    planar = [(k, a) for k, a in PLANAR_FAMILIES if k != "bipartite" or min(a) <= 1]
    assert product_mismatches(planar), "criterion 1 check missed the sign flip"

    code, out = run_cli(["verify", "greene-formula", "--seed", "42", "--trials", "10", "--format", "kv"])
    assert code == 1
    records = [ln for ln in out.splitlines() if ln.startswith("record=counterexample")]
    assert records and all("seed=42" in r and "poset=" in r for r in records)
    numbered = [r for r in records if "trial=catalog" not in r]
    trial = numbered[0].split("trial=")[1].split()[0]
    code, again = run_cli(["verify", "greene-formula", "--seed", "42", "--only-trial", trial, "--format", "kv"])
    assert code == 1
    assert again.splitlines()[0] == numbered[0]
