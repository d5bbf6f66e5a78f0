"""Finite posets whose elements carry polynomial variables.

Elements are numbered 0..n-1 (the element id); each also has a name and a
variable index into the global variable order. The strict order is stored
as bitmasks: ``below[i]`` has bit j set iff element j < element i.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Dict, Iterable, List, Sequence, Tuple

from .errors import (
    CycleDetected,
    DuplicateElement,
    NotCoverEdge,
    NotIncomparable,
    ParseError,
    SizeExceeded,
)

DEFAULT_MAX_ELEMS = 10


def _bits(mask):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


class Poset:
    def __init__(self, names: Sequence[str], variables: Sequence[int], below: Sequence[int]):
        self.names = tuple(names)
        self.vars = tuple(variables)
        self.below = tuple(below)
        if len(set(self.vars)) != len(self.vars):
            raise ValueError("variable labels must be distinct")
        if len(set(self.names)) != len(self.names):
            raise DuplicateElement("element names must be distinct")

    @property
    def n(self):
        return len(self.names)

    def __len__(self):
        return len(self.names)

    @cached_property
    def above(self):
        up = [0] * self.n
        for b in range(self.n):
            for a in _bits(self.below[b]):
                up[a] |= 1 << b
        return tuple(up)

    @cached_property
    def covers(self) -> frozenset:
        """Pairs (a, b) with a covered by b."""
        out = set()
        for b in range(self.n):
            for a in _bits(self.below[b]):
                if not (self.below[b] & self.above[a]):
                    out.add((a, b))
        return frozenset(out)

    @cached_property
    def key(self):
        """Hashable description up to element naming: variables and order."""
        return tuple(sorted((self.vars[i], frozenset(self.vars[j] for j in _bits(self.below[i])))
                            for i in range(self.n)))

    def __eq__(self, other):
        if not isinstance(other, Poset):
            return NotImplemented
        return self.names == other.names and self.vars == other.vars and self.below == other.below

    def __hash__(self):
        return hash((self.names, self.vars, self.below))

    def __repr__(self):
        rels = ", ".join(f"{self.names[a]}<{self.names[b]}" for a, b in sorted(self.covers))
        return f"Poset([{', '.join(self.names)}]; {rels})"

    # -- queries ---------------------------------------------------------------

    def id(self, e) -> int:
        if isinstance(e, str):
            try:
                return self.names.index(e)
            except ValueError:
                raise KeyError(f"no element named {e!r}") from None
        if not 0 <= e < self.n:
            raise KeyError(f"no element with id {e}")
        return e

    def lt(self, a, b) -> bool:
        return bool(self.below[self.id(b)] >> self.id(a) & 1)

    def comparable(self, a, b) -> bool:
        a, b = self.id(a), self.id(b)
        return a == b or self.lt(a, b) or self.lt(b, a)

    def maximal(self) -> List[int]:
        return [i for i in range(self.n) if not self.above[i]]

    def minimal(self) -> List[int]:
        return [i for i in range(self.n) if not self.below[i]]

    def relations(self) -> List[Tuple[int, int]]:
        return [(a, b) for b in range(self.n) for a in _bits(self.below[b])]

    def var_names(self) -> Dict[int, str]:
        return dict(zip(self.vars, self.names))

    def restrict(self, ids: Iterable[int]) -> "Poset":
        ids = sorted(set(ids))
        pos = {old: new for new, old in enumerate(ids)}
        below = []
        for old in ids:
            m = 0
            for j in _bits(self.below[old]):
                if j in pos:
                    m |= 1 << pos[j]
            below.append(m)
        return Poset([self.names[i] for i in ids], [self.vars[i] for i in ids], below)

    def relabel(self, variables: Sequence[int]) -> "Poset":
        return Poset(self.names, variables, self.below)

    @cached_property
    def _mobius_table(self):
        n = self.n
        mu = {}
        # process intervals by increasing length: mu(a,b) = -sum_{a<c<=b} mu(c,b)
        order = sorted(range(n), key=lambda i: bin(self.below[i]).count("1"))
        for b in order:
            mu[(b, b)] = 1
            lower = sorted(_bits(self.below[b]), key=lambda i: -bin(self.below[i]).count("1"))
            for a in lower:
                s = 0
                for c in _bits(self.above[a] & (self.below[b] | 1 << b)):
                    s += mu[(c, b)]
                mu[(a, b)] = -s
        return mu


# -- construction ------------------------------------------------------------------


def _close(n, lower_sets):
    """Transitive closure with cycle detection; lower_sets[b] = set of a with a<b."""
    indeg = [0] * n
    ups = [[] for _ in range(n)]
    for b in range(n):
        for a in lower_sets[b]:
            ups[a].append(b)
            indeg[b] += 1
    ready = [i for i in range(n) if indeg[i] == 0]
    order = []
    while ready:
        a = ready.pop()
        order.append(a)
        for b in ups[a]:
            indeg[b] -= 1
            if indeg[b] == 0:
                ready.append(b)
    if len(order) != n:
        raise CycleDetected("order relations contain a cycle")
    below = [0] * n
    for b in order:
        m = 0
        for a in lower_sets[b]:
            m |= (1 << a) | below[a]
        below[b] = m
    return below


def build_poset(elements, relations: Iterable[Tuple] = ()) -> Poset:
    """Build a poset from element names (or (name, var) pairs) and pairs a < b.

    Relations may use names or ids; transitive consequences are inferred.
    """
    names, variables = [], []
    for i, e in enumerate(elements):
        if isinstance(e, tuple):
            names.append(e[0])
            variables.append(e[1])
        else:
            names.append(e)
            variables.append(i)
    if len(set(names)) != len(names):
        raise DuplicateElement("duplicate element name")
    index = {nm: i for i, nm in enumerate(names)}

    def ident(e):
        return index[e] if isinstance(e, str) else e

    lower_sets = [set() for _ in names]
    for a, b in relations:
        a, b = ident(a), ident(b)
        if a == b:
            raise CycleDetected(f"reflexive relation on {names[a]}")
        lower_sets[b].add(a)
    return Poset(names, variables, _close(len(names), lower_sets))


def add_relations(P: Poset, pairs) -> Poset:
    """P with a < b added for every (a, b), plus transitive consequences."""
    pairs = [(P.id(a), P.id(b)) for a, b in pairs]
    for a, b in pairs:
        if P.comparable(a, b):
            raise NotIncomparable(f"{P.names[a]} and {P.names[b]} are already comparable")
    lower_sets = [set(_bits(P.below[b])) for b in range(P.n)]
    for a, b in pairs:
        lower_sets[b].add(a)
    return Poset(P.names, P.vars, _close(P.n, lower_sets))


def mobius(P: Poset, a, b) -> int:
    a, b = P.id(a), P.id(b)
    return P._mobius_table.get((a, b), 0)


def linear_extensions(P: Poset, max_elems: int | None = DEFAULT_MAX_ELEMS) -> List[Tuple[int, ...]]:
    """All linear extensions as words from a maximum down to a minimum."""
    if max_elems is not None and P.n > max_elems:
        raise SizeExceeded(f"{P.n} elements exceeds the bound {max_elems}")
    out = []
    word = []
    full = (1 << P.n) - 1

    def rec(remaining):
        if not remaining:
            out.append(tuple(word))
            return
        for m in _bits(remaining):
            if not (P.above[m] & remaining):
                word.append(m)
                rec(remaining & ~(1 << m))
                word.pop()

    rec(full)
    return out


def count_linear_extensions(P: Poset) -> int:
    memo = {0: 1}

    def rec(remaining):
        if remaining in memo:
            return memo[remaining]
        total = sum(rec(remaining & ~(1 << m)) for m in _bits(remaining)
                    if not (P.above[m] & remaining))
        memo[remaining] = total
        return total

    return rec((1 << P.n) - 1)


def is_linear_extension(P: Poset, word) -> bool:
    if sorted(word) != list(range(P.n)):
        return False
    pos = {e: i for i, e in enumerate(word)}
    return all(pos[b] < pos[a] for a, b in P.relations())


@dataclass(frozen=True)
class SeparatingSubset:
    members: Tuple[int, ...]
    below: Tuple[int, ...]
    above: Tuple[int, ...]

    @property
    def k(self):
        return len(self.members)


def separating_subset(P: Poset, members) -> SeparatingSubset | None:
    members = tuple(sorted(P.id(m) for m in members))
    mask = 0
    for m in members:
        mask |= 1 << m
    below_all = above_all = (1 << P.n) - 1
    for m in members:
        if P.below[m] & mask or P.above[m] & mask:
            return None
        below_all &= P.below[m]
        above_all &= P.above[m]
    if (below_all | above_all | mask) != (1 << P.n) - 1:
        return None
    return SeparatingSubset(members, tuple(_bits(below_all)), tuple(_bits(above_all)))


def separating_subsets(P: Poset) -> List[SeparatingSubset]:
    """Every separating subset, by size and then lexicographically."""
    out = []
    for k in range(1, P.n + 1):
        for combo in combinations(range(P.n), k):
            s = separating_subset(P, combo)
            if s is not None:
                out.append(s)
    return out


def components(P: Poset) -> List[List[int]]:
    parent = list(range(P.n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a, b in P.covers:
        parent[find(a)] = find(b)
    groups: Dict[int, List[int]] = {}
    for i in range(P.n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values())


def is_connected(P: Poset) -> bool:
    return len(components(P)) <= 1


def cycle_rank(P: Poset) -> int:
    return len(P.covers) - P.n + len(components(P))


def contract_edge(P: Poset, a, b) -> Poset:
    """Merge the cover pair a < b into one element carrying a's name and variable."""
    a, b = P.id(a), P.id(b)
    if (a, b) not in P.covers:
        raise NotCoverEdge(f"{P.names[a]} < {P.names[b]} is not a cover relation")
    keep = [i for i in range(P.n) if i != b]
    pos = {old: new for new, old in enumerate(keep)}
    pos[b] = pos[a]
    lower_sets = [set() for _ in keep]
    for x, y in P.relations():
        if pos[x] != pos[y]:
            lower_sets[pos[y]].add(pos[x])
    return Poset([P.names[i] for i in keep], [P.vars[i] for i in keep], _close(len(keep), lower_sets))


# -- catalog -----------------------------------------------------------------------


def _layers(named_layers, relations):
    elements = []
    for layer in named_layers:
        elements.extend(layer)
    return build_poset([(nm, i) for i, nm in enumerate(elements)], relations)


def catalog(kind: str, *args, **params) -> Poset:
    """Named posets. Variables are numbered z's first, then x's, then y's.

    chain(n)              x1 > x2 > ... > xn
    antichain(n)          x1, ..., xn
    star(n)               z above the antichain x1..xn
    diamond()             z > x1, x2 > t
    bipartite(k, n)       every z_i above every x_j
    triple(k, n, l)       Z_k > X_n > Y_l, all pairs between consecutive layers
    fence(k, n)           P(Z_k, X_n, Y_{n-1}): x_i < z_j, y_i < x_i, y_i < x_{i+1}
    """
    if args:
        keys = {
            "chain": ["n"], "antichain": ["n"], "star": ["n"], "diamond": [],
            "bipartite": ["k", "n"], "triple": ["k", "n", "l"], "fence": ["k", "n"],
        }[kind]
        params.update(zip(keys, args))
    for v in params.values():
        if isinstance(v, int) and v < 0:
            raise ValueError("catalog parameters must be non-negative")
    if kind == "chain":
        n = params["n"]
        xs = [f"x{i}" for i in range(1, n + 1)]
        return _layers([xs], [(xs[i + 1], xs[i]) for i in range(n - 1)])
    if kind == "antichain":
        return _layers([[f"x{i}" for i in range(1, params["n"] + 1)]], [])
    if kind == "star":
        xs = [f"x{i}" for i in range(1, params["n"] + 1)]
        return _layers([["z"], xs], [(x, "z") for x in xs])
    if kind == "diamond":
        return _layers([["z"], ["x1", "x2"], ["t"]],
                       [("x1", "z"), ("x2", "z"), ("t", "x1"), ("t", "x2")])
    if kind == "bipartite":
        zs = [f"z{i}" for i in range(1, params["k"] + 1)]
        xs = [f"x{i}" for i in range(1, params["n"] + 1)]
        return _layers([zs, xs], [(x, z) for z in zs for x in xs])
    if kind == "triple":
        zs = [f"z{i}" for i in range(1, params["k"] + 1)]
        xs = [f"x{i}" for i in range(1, params["n"] + 1)]
        ys = [f"y{i}" for i in range(1, params["l"] + 1)]
        return _layers([zs, xs, ys], [(x, z) for z in zs for x in xs] + [(y, x) for x in xs for y in ys])
    if kind == "fence":
        k, n = params["k"], params["n"]
        zs = [f"z{i}" for i in range(1, k + 1)]
        xs = [f"x{i}" for i in range(1, n + 1)]
        ys = [f"y{i}" for i in range(1, n)]
        rels = [(x, z) for z in zs for x in xs]
        for i, y in enumerate(ys):
            rels += [(y, xs[i]), (y, xs[i + 1])]
        return _layers([zs, xs, ys], rels)
    raise ValueError(f"unknown catalog kind {kind!r}")


def catalog_planar(kind: str, **params) -> bool:
    """Planarity (with an extra top and bottom) as a catalog attribute, never computed."""
    if kind in ("chain", "star", "diamond"):
        return True
    if kind == "bipartite":
        return min(params["k"], params["n"]) <= 1
    if kind == "fence":
        return params["k"] <= 1 or params["n"] <= 1
    if kind == "triple":
        k, n, l = params["k"], params["n"], params["l"]
        return min(k, n) <= 1 and min(n, l) <= 1
    return False


def disjoint_union(P: Poset, Q: Poset) -> Poset:
    shift = max(P.vars, default=-1) + 1 - min(Q.vars, default=0)
    names = list(P.names) + [nm if nm not in P.names else nm + "'" for nm in Q.names]
    below = list(P.below) + [m << P.n for m in Q.below]
    return Poset(names, list(P.vars) + [v + shift for v in Q.vars], below)


def random_poset(seed, n: int, edge_density: float, max_elems: int = DEFAULT_MAX_ELEMS) -> Poset:
    """Seeded random DAG on n elements, closed transitively.

    Each pair is related with probability ``edge_density`` along a hidden
    random linear order, so any poset on n labelled points can appear.
    """
    if n > max_elems:
        raise SizeExceeded(f"{n} elements exceeds the bound {max_elems}")
    rng = random.Random(seed)
    hidden = list(range(n))
    rng.shuffle(hidden)
    rels = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < edge_density:
                rels.append((hidden[i], hidden[j]))
    return build_poset([f"e{i}" for i in range(n)], rels)


def ordinal_sum(*parts: Poset) -> Poset:
    """Stack posets, each part entirely above the previous ones; variables renumbered."""
    names, below, offset = [], [], 0
    lower_mask = 0
    for part in parts:
        for i in range(part.n):
            names.append(part.names[i])
            below.append((part.below[i] << offset) | lower_mask)
        lower_mask |= ((1 << part.n) - 1) << offset
        offset += part.n
    if len(set(names)) != len(names):
        names = [f"e{i}" for i in range(len(names))]
    return Poset(names, range(len(names)), below)


# -- text format ---------------------------------------------------------------------

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def parse_poset_text(text: str) -> Poset:
    """Parse ``elem <name>`` / ``rel <a> < <b>`` lines; ``#`` starts a comment."""
    names: List[str] = []
    rels = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        col = len(line) - len(line.lstrip()) + 1
        toks = line.split()
        if toks[0] == "elem":
            if len(toks) != 2:
                raise ParseError("expected 'elem <name>'", lineno, col)
            if not _NAME.match(toks[1]) or not toks[1].isascii():
                raise ParseError(f"bad element name {toks[1]!r}", lineno, raw.index(toks[1]) + 1)
            if toks[1] in names:
                raise DuplicateElement(f"line {lineno}: duplicate element {toks[1]!r}")
            names.append(toks[1])
        elif toks[0] == "rel":
            if len(toks) != 4 or toks[2] != "<":
                raise ParseError("expected 'rel <a> < <b>'", lineno, col)
            for t in (toks[1], toks[3]):
                if t not in names:
                    raise ParseError(f"undeclared element {t!r}", lineno, raw.index(t) + 1)
            rels.append((toks[1], toks[3]))
        else:
            raise ParseError(f"unknown directive {toks[0]!r}", lineno, col)
    return build_poset(names, rels)


def format_poset_text(P: Poset) -> str:
    """Serialize P; elements are written in variable order so indices round-trip."""
    order = sorted(range(P.n), key=lambda i: P.vars[i])
    lines = [f"elem {P.names[i]}" for i in order]
    lines += [f"rel {P.names[a]} < {P.names[b]}" for a, b in sorted(P.covers, key=lambda c: (P.vars[c[0]], P.vars[c[1]]))]
    return "\n".join(lines) + "\n"
