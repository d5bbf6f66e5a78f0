"""Command-line front end.

    greenesums ext FILE [--list]
    greenesums greene FILE [--method brute|product|recursive|enumerate]
    greenesums mobius FILE
    greenesums nd FILE
    greenesums verify IDENTITY [--seed S] [--trials T] [--only-trial I]

Exit status: 0 when everything verified, 1 when a counterexample was found,
2 on usage, parse or size errors.

Trial t of ``verify`` draws everything from random.Random(seed * 100003 + t),
so a single failing trial can be replayed with ``--only-trial t``.
"""
from __future__ import annotations

import argparse
import os
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Callable, Dict, List, Optional

from . import forms, greene, interp, series
from .errors import DivisionByZero, GreeneError, PoleAtX, PreconditionFailed
from .poset import (
    DEFAULT_MAX_ELEMS,
    Poset,
    build_poset,
    catalog,
    catalog_planar,
    components,
    count_linear_extensions,
    format_poset_text,
    is_connected,
    linear_extensions,
    mobius,
    ordinal_sum,
    parse_poset_text,
    random_poset,
    separating_subsets,
)

SEED_STRIDE = 100003

IDENTITIES = (
    "prop1", "prop2", "prop3", "prop4", "prop5", "prop6", "greene-formula",
    "nd-structure", "contraction", "partition", "arnold", "dd-forms",
)


@dataclass
class RunConfig:
    subcommand: str
    path: Optional[str] = None
    identity: Optional[str] = None
    seed: int = 0
    trials: int = 20
    only_trial: Optional[int] = None
    max_elems: int = DEFAULT_MAX_ELEMS
    method: str = "brute"
    fmt: str = "text"
    list_all: bool = False


class UsageError(Exception):
    pass


def parse_poset_file(path) -> Poset:
    with open(path, encoding="utf-8") as fh:
        return parse_poset_text(fh.read())


# -- random instances ------------------------------------------------------------------------


def _values(rng, m, spread=60):
    """m distinct rationals with small numerators and denominators."""
    seen, out = set(), []
    while len(out) < m:
        v = Fraction(rng.randint(-spread, spread), rng.randint(1, 4))
        if v not in seen:
            seen.add(v)
            out.append(v)
    return out


def _assignment(P: Poset, rng) -> Dict[int, Fraction]:
    return dict(zip(P.vars, _values(rng, P.n)))


def _shuffled(P: Poset, rng) -> Poset:
    vs = list(P.vars)
    rng.shuffle(vs)
    return P.relabel(vs)


def _connected_poset(rng, lo, hi, density=0.45):
    while True:
        P = random_poset(rng.getrandbits(32), rng.randint(lo, hi), density)
        if is_connected(P):
            return P


def _random_tree(rng, n) -> Poset:
    names = [f"t{i}" for i in range(n)]
    rels = []
    for i in range(1, n):
        j = rng.randrange(i)
        rels.append((names[i], names[j]) if rng.random() < 0.5 else (names[j], names[i]))
    return build_poset(names, rels)


def _separated_poset(rng, max_n=8) -> Poset:
    """Ordinal sum below + antichain + above, so an antichain separator exists."""
    while True:
        a, b = rng.randint(0, 2), rng.randint(0, 2)
        k = rng.randint(1, min(5, max_n - a - b))
        parts = []
        if a:
            parts.append(random_poset(rng.getrandbits(32), a, 0.5))
        parts.append(catalog("antichain", k))
        if b:
            parts.append(random_poset(rng.getrandbits(32), b, 0.5))
        P = ordinal_sum(*reversed(parts))
        if is_connected(P):
            return _shuffled(P, rng)


def planar_catalog() -> List[Poset]:
    out = [catalog("chain", n) for n in range(1, 7)]
    out += [catalog("star", n) for n in range(1, 7)]
    out.append(catalog("diamond"))
    out += [catalog("fence", 1, n) for n in range(1, 5)]
    out += [catalog("bipartite", k, n) for k in range(1, 4) for n in range(1, 4)
            if catalog_planar("bipartite", k=k, n=n)]
    return out


def _random_planar(rng) -> Poset:
    kind = rng.choice(["chain", "star", "diamond", "fence", "bipartite", "tree"])
    if kind == "chain":
        P = catalog("chain", rng.randint(1, 6))
    elif kind == "star":
        P = catalog("star", rng.randint(1, 6))
    elif kind == "diamond":
        P = catalog("diamond")
    elif kind == "fence":
        P = catalog("fence", 1, rng.randint(1, 4))
    elif kind == "bipartite":
        k = rng.randint(1, 3)
        P = catalog("bipartite", k, 1) if rng.random() < 0.5 else catalog("bipartite", 1, k)
    else:
        P = _random_tree(rng, rng.randint(2, 8))
    return _shuffled(P, rng)


# -- verifiers: each yields (ok, record) pairs ------------------------------------------------------


def _rec(P=None, assignment=None, **extra):
    r = {}
    if P is not None:
        r["poset"] = format_poset_text(P)
    if assignment is not None:
        r["assignment"] = {f"x{v}": str(val) for v, val in sorted(assignment.items())}
    r.update(extra)
    return r


def _v_prop1(rng):
    P = _separated_poset(rng)
    g = greene.greene_brute(P).value
    out = []
    for Z in separating_subsets(P):
        for part in (1, 2, 3, 4, 5):
            try:
                r = greene.prop1_reduce(P, Z, part).value
            except PreconditionFailed:
                continue
            out.append((r == g, _rec(P, separator=[P.names[i] for i in Z.members], part=part)))
        if Z.k >= 4:
            vals = _assignment(P, rng)
            ctx = greene.separator_context(P, Z, vals)
            b = greene.prop1_part5_binomial(ctx)
            d = greene.prop1_part5_determinant(ctx)
            ok = b == d == greene.greene_value(P, vals)
            out.append((ok, _rec(P, vals, separator=[P.names[i] for i in Z.members], part="5-det")))
    rv = greene.greene_recursive(P).value
    out.append((rv == g, _rec(P, method="recursive")))
    return out


def _v_prop2(rng):
    k = rng.randint(1, 4)
    n = rng.randint(1, 3)
    p = rng.randint(1, k)
    vals = _values(rng, k + 2 * n - 1)
    Z, X, Y = vals[:k], vals[k:k + n], vals[k + n:]
    r = interp.prop2_check(p, k, n, Z, X, Y)
    return [(r.ok, _rec(p=p, Z=[str(v) for v in Z], X=[str(v) for v in X], Y=[str(v) for v in Y]))]


def _v_prop3(rng):
    p = rng.randint(1, 3)
    H = [Fraction(rng.randint(-5, 5)) for _ in range(rng.randint(0, 3))] + [Fraction(rng.randint(1, 5))]
    N = len(H) - 1 + p
    vals = _values(rng, N + p)
    r = interp.prop3_expand(H, p, vals[:N], vals[N:])
    return [(r.ok, _rec(H=[str(c) for c in H], p=p, nodes=[str(v) for v in vals[:N]], t=[str(v) for v in vals[N:]]))]


def _v_prop4(rng):
    if rng.random() < 0.5:
        n = rng.randint(2, 6)
        vals = _values(rng, n + 1)
        F = [Fraction(rng.randint(-5, 5)) for _ in range(rng.randint(1, n))]
        r = series.triangle_newton_check(F, vals[:n], vals[n])
        return [(r.ok, _rec(sequence="triangle", F=[str(c) for c in F], nodes=[str(v) for v in vals[:n]], x=str(vals[n])))]
    ms = [rng.randint(1, 3) for _ in range(rng.randint(2, 4))]
    seq = series.star_sequence(ms)
    fv = seq.free_variables()
    vals = _values(rng, len(fv) + 1)
    F = [Fraction(rng.randint(-5, 5)) for _ in range(3)]
    e = series.prop4_expand(seq, F, len(ms), dict(zip(fv, vals)), vals[-1])
    return [(e.report.ok, _rec(sequence="star", m=ms, F=[str(c) for c in F],
                               assignment={f"x{v}": str(a) for v, a in zip(fv, vals)}, x=str(vals[-1])))]


def _prop5_instance(rng):
    kind = rng.choice(["star", "fence", "diamond"])
    if kind == "star":
        P, z = catalog("star", rng.randint(1, 5)), "z"
    elif kind == "fence":
        P = catalog("fence", rng.randint(1, 2), rng.randint(1, 3))
        z = rng.choice([P.names[i] for i in range(P.n)])
    else:
        P = catalog("diamond")
        z = rng.choice(["z", "x1", "t"])
    return P, z


def _v_prop5(rng):
    P, z = _prop5_instance(rng)
    vals = _values(rng, P.n + 1)
    assign = dict(zip(P.vars, vals))
    F = [Fraction(rng.randint(-5, 5)) for _ in range(rng.randint(1, 4))]
    try:
        e = series.prop5_expand(P, z, F, assign, vals[-1])
    except PoleAtX:
        return []
    return [(e.report.ok, _rec(P, assign, z=z, F=[str(c) for c in F], x=str(vals[-1])))]


def _v_prop6(rng):
    n = rng.randint(1, 6)
    nodes = _values(rng, n)
    F = [Fraction(rng.randint(-5, 5)) for _ in range(rng.randint(1, 7))]
    ok = interp.lagrange(F, nodes) == interp.lagrange(F, nodes, "permutation")
    return [(ok, _rec(F=[str(c) for c in F], nodes=[str(v) for v in nodes]))]


def _product_check(P):
    # looked up on the module each time so a patched implementation is what gets tested
    return greene.greene_product(P).value == greene.greene_brute(P).value


def _v_greene_formula(rng):
    P = _random_planar(rng)
    return [(_product_check(P), _rec(P))]


def _c_greene_formula():
    return [(_product_check(P), _rec(P)) for P in planar_catalog()]


def _v_nd(rng):
    P = _connected_poset(rng, 1, 7)
    out = [(greene.nd_structure(P).report.ok, _rec(P))]
    Q = random_poset(rng.getrandbits(32), rng.randint(2, 7), 0.2)
    if not is_connected(Q):
        out.append((greene.greene_brute(Q).value.is_zero(), _rec(Q, note="disconnected")))
    return out


def _v_contraction(rng):
    P = _connected_poset(rng, 2, 7)
    a, b = rng.choice(sorted(P.covers))
    r = greene.contraction_law_check(P, a, b)
    return [(r.ok, _rec(P, edge=[P.names[a], P.names[b]]))]


def _v_partition(rng):
    while True:
        P = random_poset(rng.getrandbits(32), rng.randint(2, 7), 0.35)
        pairs = [(a, b) for a in range(P.n) for b in range(a + 1, P.n) if not P.comparable(a, b)]
        if pairs:
            break
    a, b = rng.choice(pairs)
    r = greene.partition_identity_check(P, a, b)
    return [(r.ok, _rec(P, pair=[P.names[a], P.names[b]]))]


def _v_arnold(rng):
    i, j, k = rng.sample(range(6), 3)
    out = [(forms.arnold_relation_check(i, j, k).ok, _rec(triple=[i, j, k]))]
    P = forms.relabel_to_extension(random_poset(rng.getrandbits(32), rng.randint(1, 6), 0.4))
    out.append((forms.signed_extension_identity_check(P).ok, _rec(P)))
    return out


def _c_arnold():
    return [(forms.arnold_relation_check(*t).ok, _rec(triple=list(t))) for t in permutations(range(6), 3)]


def _v_dd(rng):
    n = rng.randint(1, 6)
    nodes = _values(rng, n)
    F = [Fraction(rng.randint(-9, 9)) for _ in range(rng.randint(1, 6))]
    a, b, c = (interp.divided_difference(F, nodes, f) for f in ("sum", "det", "residue"))
    out = [(a == b == c, _rec(F=[str(v) for v in F], nodes=[str(v) for v in nodes]))]
    if n >= 3:
        i, j, k = rng.sample(range(1, n + 1), 3)
        r = interp.dd_relations_check(F, nodes, i, j, k)
        out.append((r.ok, _rec(F=[str(v) for v in F], nodes=[str(v) for v in nodes], ijk=[i, j, k])))
    return out


VERIFIERS: Dict[str, tuple] = {
    "prop1": (_v_prop1, None),
    "prop2": (_v_prop2, None),
    "prop3": (_v_prop3, None),
    "prop4": (_v_prop4, None),
    "prop5": (_v_prop5, None),
    "prop6": (_v_prop6, None),
    "greene-formula": (_v_greene_formula, _c_greene_formula),
    "nd-structure": (_v_nd, None),
    "contraction": (_v_contraction, None),
    "partition": (_v_partition, None),
    "arnold": (_v_arnold, _c_arnold),
    "dd-forms": (_v_dd, None),
}


def trial_rng(seed: int, trial: int) -> random.Random:
    return random.Random(seed * SEED_STRIDE + trial)


def run_verify(identity: str, seed: int, trials: int, only_trial: Optional[int] = None):
    """Run the checks; returns (number of checks, list of counterexample records)."""
    trial_fn, catalog_fn = VERIFIERS[identity]
    failures = []
    checks = 0
    if catalog_fn is not None and only_trial is None:
        for ok, rec in catalog_fn():
            checks += 1
            if not ok:
                failures.append(dict(rec, identity=identity, seed=seed, trial="catalog"))
    indices = [only_trial] if only_trial is not None else range(trials)
    for t in indices:
        rng = trial_rng(seed, t)
        for attempt in range(20):
            try:
                results = trial_fn(rng)
                break
            except DivisionByZero:
                continue  # inadmissible sample; the same rng moves on deterministically
        else:
            results = []
        for ok, rec in results:
            checks += 1
            if not ok:
                failures.append(dict(rec, identity=identity, seed=seed, trial=t))
    return checks, failures


# -- output --------------------------------------------------------------------------------------


def _kv_value(v) -> str:
    if isinstance(v, str):
        v = v.strip().replace("\n", ";")
        return v if v and " " not in v and "=" not in v else '"' + v.replace('"', "'") + '"'
    if isinstance(v, dict):
        return ",".join(f"{k}:{x}" for k, x in v.items())
    if isinstance(v, (list, tuple)):
        return ",".join(str(x) for x in v)
    return str(v)


def _emit(fmt: str, out, pairs: List[tuple]):
    if fmt == "kv":
        out.write(" ".join(f"{k}={_kv_value(v)}" for k, v in pairs) + "\n")
    else:
        out.write("  ".join(f"{k}: {v}" if k else str(v) for k, v in pairs) + "\n")


def _print_record(fmt, out, rec):
    keys = ["identity", "seed", "trial"] + sorted(k for k in rec if k not in ("identity", "seed", "trial"))
    if fmt == "kv":
        _emit(fmt, out, [("record", "counterexample")] + [(k, rec[k]) for k in keys])
        return
    out.write(f"counterexample: identity={rec['identity']} seed={rec['seed']} trial={rec['trial']}\n")
    for k in keys[3:]:
        v = rec[k]
        if k == "poset":
            out.write("  poset:\n" + "".join(f"    {line}\n" for line in v.strip().splitlines()))
        elif isinstance(v, dict):
            out.write(f"  {k}: " + ", ".join(f"{a}={b}" for a, b in v.items()) + "\n")
        else:
            out.write(f"  {k}: {v}\n")


def run(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    if cfg.subcommand == "verify":
        if cfg.identity not in VERIFIERS:
            raise UsageError(f"unknown identity {cfg.identity!r}; choose from {', '.join(IDENTITIES)}")
        checks, failures = run_verify(cfg.identity, cfg.seed, cfg.trials, cfg.only_trial)
        for rec in failures:
            _print_record(cfg.fmt, out, rec)
        status = "verified" if not failures else "counterexample"
        trials = 1 if cfg.only_trial is not None else cfg.trials
        _emit(cfg.fmt, out, [("identity", cfg.identity), ("seed", cfg.seed), ("trials", trials),
                             ("checks", checks), ("counterexamples", len(failures)), ("status", status)])
        return 0 if not failures else 1

    P = parse_poset_file(cfg.path)
    if P.n > cfg.max_elems:
        raise UsageError(f"{P.n} elements exceeds --max-elems {cfg.max_elems}")
    names = P.var_names()
    if cfg.subcommand == "ext":
        _emit(cfg.fmt, out, [("count", count_linear_extensions(P))])
        if cfg.list_all:
            for w in linear_extensions(P, cfg.max_elems):
                _emit(cfg.fmt, out, [("extension", " ".join(P.names[e] for e in w))])
        return 0
    if cfg.subcommand == "greene":
        fn = {
            "brute": lambda: greene.greene_brute(P, cfg.max_elems).value,
            "enumerate": lambda: greene.greene_enumerate(P, cfg.max_elems),
            "product": lambda: greene.greene_product(P).value,
            "recursive": lambda: greene.greene_recursive(P, cfg.max_elems).value,
        }[cfg.method]
        _emit(cfg.fmt, out, [("G", fn().format(names))])
        return 0
    if cfg.subcommand == "mobius":
        for a in range(P.n):
            for b in range(P.n):
                if a == b or P.lt(a, b):
                    _emit(cfg.fmt, out, [("mu", f"{P.names[a]},{P.names[b]}"), ("value", mobius(P, a, b))])
        return 0
    if cfg.subcommand == "nd":
        nd = greene.nd_structure(P)
        D = "*".join(f"({names[h]} - {names[l]})" + (f"^{e}" if e > 1 else "") for h, l, e in nd.D) or "1"
        pairs = [("N", nd.N.format(names)), ("D", D)]
        pairs += [(k, v) for k, v in nd.report.details.items()]
        pairs.append(("status", "ok" if nd.report.ok else "failed"))
        for k, v in pairs:
            _emit(cfg.fmt, out, [(k, v)])
        return 0 if nd.report.ok else 1
    raise UsageError(f"unknown subcommand {cfg.subcommand!r}")


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-elems", type=int, default=None, help="size bound (default 10)")
    common.add_argument("--unsafe-size", action="store_true", help="allow --max-elems above 10")
    common.add_argument("--format", choices=["text", "kv"], default="text", dest="fmt")

    p = argparse.ArgumentParser(prog="greenesums", description="Greene sums of posets and related identities.")
    sub = p.add_subparsers(dest="subcommand", required=True)
    e = sub.add_parser("ext", parents=[common], help="count or list linear extensions")
    e.add_argument("path")
    e.add_argument("--list", action="store_true", dest="list_all")
    g = sub.add_parser("greene", parents=[common], help="print the reduced Greene sum")
    g.add_argument("path")
    g.add_argument("--method", choices=["brute", "enumerate", "product", "recursive"], default="brute")
    m = sub.add_parser("mobius", parents=[common], help="print the Moebius function")
    m.add_argument("path")
    n = sub.add_parser("nd", parents=[common], help="numerator/denominator structure")
    n.add_argument("path")
    v = sub.add_parser("verify", parents=[common], help="check an identity on seeded instances")
    v.add_argument("identity", choices=IDENTITIES)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--trials", type=int, default=20)
    v.add_argument("--only-trial", type=int, default=None)
    return p


def config_from_args(argv=None) -> RunConfig:
    args = _parser().parse_args(argv)
    env = os.environ.get("GREENE_MAX_ELEMS")
    max_elems = args.max_elems
    if max_elems is None:
        max_elems = int(env) if env else DEFAULT_MAX_ELEMS
    if max_elems > DEFAULT_MAX_ELEMS and not (args.unsafe_size or env):
        raise UsageError(f"--max-elems above {DEFAULT_MAX_ELEMS} needs --unsafe-size or GREENE_MAX_ELEMS")
    cfg = RunConfig(subcommand=args.subcommand, fmt=args.fmt, max_elems=max_elems)
    if args.subcommand == "verify":
        cfg.identity = args.identity
        cfg.seed = args.seed
        cfg.trials = args.trials
        cfg.only_trial = args.only_trial
        if cfg.seed < 0 or cfg.seed >= 2 ** 64:
            raise UsageError("--seed must be an unsigned 64-bit integer")
        if cfg.trials < 1:
            raise UsageError("--trials must be at least 1")
    else:
        cfg.path = args.path
        cfg.method = getattr(args, "method", "brute")
        cfg.list_all = getattr(args, "list_all", False)
    return cfg


def main(argv=None) -> int:
    try:
        cfg = config_from_args(argv)
    except SystemExit as exc:  # argparse usage errors
        return int(exc.code or 0) and 2
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        return run(cfg)
    except (UsageError, GreeneError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
