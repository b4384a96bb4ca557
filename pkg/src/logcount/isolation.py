"""Isolating weightings, min-uniqueness and weight-based path counting."""

from __future__ import annotations

import heapq
import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

from .errors import InvariantError
from .graphs import (
    Digraph,
    LayeredDag,
    PathCount,
    count_simple_paths,
    reachable,
    topological_order,
)

DEFAULT_SEED = 20240229


@dataclass(frozen=True)
class WeightFn:
    """weights[j] is the weight of universe element j; all lie in [1, r]."""

    weights: Tuple[int, ...]
    r: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "weights", tuple(self.weights))
        for x in self.weights:
            if not 1 <= x <= self.r:
                raise InvariantError(f"weight {x} outside [1, {self.r}]")

    def of(self, subset: Iterable[int]) -> int:
        return sum(self.weights[j] for j in subset)


@dataclass(frozen=True)
class SetFamily:
    m: int
    sets: Tuple[FrozenSet[int], ...]

    def __post_init__(self) -> None:
        sets = tuple(frozenset(x) for x in self.sets)
        object.__setattr__(self, "sets", sets)
        if len(set(sets)) != len(sets):
            raise InvariantError("family members must be distinct")
        for x in sets:
            if not x:
                raise InvariantError("family members must be non-empty")
            if any(not 0 <= j < self.m for j in x):
                raise InvariantError(f"member {sorted(x)} leaves the universe [0, {self.m})")


def is_good(w: WeightFn, fam: SetFamily) -> bool:
    """True iff exactly one member attains the minimum total weight."""
    if len(w.weights) < fam.m:
        raise InvariantError("weight function does not cover the universe")
    totals = [w.of(x) for x in fam.sets]
    best = min(totals)
    return totals.count(best) == 1


def isolation_probability(
    fam: SetFamily,
    r: int,
    trials: Optional[int] = None,
    seed: int = DEFAULT_SEED,
) -> Fraction:
    """Fraction of weight functions [m] -> [1, r] that are good for ``fam``.

    With ``trials=None`` all r**m functions are enumerated and the value is
    exact; otherwise ``trials`` functions are drawn uniformly using ``seed``.
    """
    if r < 1:
        raise InvariantError("r must be positive")
    if trials is None:
        good = sum(
            is_good(WeightFn(ws, r), fam)
            for ws in itertools.product(range(1, r + 1), repeat=fam.m)
        )
        return Fraction(good, r**fam.m)
    if trials <= 0:
        raise InvariantError("trials must be positive")
    rng = random.Random(seed)
    good = 0
    for _ in range(trials):
        ws = tuple(rng.randint(1, r) for _ in range(fam.m))
        good += is_good(WeightFn(ws, r), fam)
    return Fraction(good, trials)


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def next_prime_above(x: int) -> int:
    """Least prime strictly greater than x."""
    p = x + 1
    while not is_prime(p):
        p += 1
    return p


def power_weights(i: int, n: int, r: int) -> Tuple[int, ...]:
    """w_i(j) = i**j mod r for elements j = 1..n (element index j-1)."""
    return tuple(pow(i, j, r) for j in range(1, n + 1))


def polynomial_weight_family(n: int, fam: SetFamily, p_bound: int) -> Tuple[int, int, WeightFn]:
    """Find i such that w_i separates all members of ``fam`` modulo r.

    r is the least prime above (n+1)^2 * p_bound^2. Since r is prime and
    1 <= i < r, every weight i**j mod r is nonzero.
    """
    if len(fam.sets) > p_bound:
        raise InvariantError("family is larger than p_bound")
    if fam.m > n:
        raise InvariantError("universe larger than n")
    r = next_prime_above((n + 1) ** 2 * p_bound**2)
    for i in range(1, r):
        ws = power_weights(i, n, r)
        totals = [sum(ws[j] for j in x) % r for x in fam.sets]
        if len(set(totals)) == len(totals):
            return i, r, WeightFn(ws, r)
    raise AssertionError("no separating weight function found")  # r exceeds the number of bad i


def expand_weighted_edges(g: Digraph) -> Digraph:
    """Replace each edge of weight w by a path of w unit edges.

    Original vertices keep their indices; fresh vertices are appended in
    sorted-edge order.
    """
    if g.weight is None:
        return Digraph(g.n, g.edges)
    edges = []
    nxt = g.n
    for u, v in g.sorted_edges():
        w = g.weight[(u, v)]
        if w < 1:
            raise InvariantError(f"edge ({u}, {v}) has nonpositive weight {w}")
        prev = u
        for _ in range(w - 1):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
        edges.append((prev, v))
    return Digraph(nxt, frozenset(edges))


def _check_positive(g: Digraph) -> None:
    if g.weight is not None:
        for e, w in g.weight.items():
            if w < 1:
                raise InvariantError(f"edge {e} has nonpositive weight {w}")


def min_weight_path_counts(g: Digraph, s: int) -> Tuple[Dict[int, int], Dict[int, int]]:
    """Dijkstra from s returning (distance, number of minimum-weight paths)."""
    _check_positive(g)
    g.check_vertex(s)
    dist = {s: 0}
    ways = {s: 1}
    done: Set[int] = set()
    heap = [(0, s)]
    while heap:
        du, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for v in g.succ(u):
            nd = du + g.w(u, v)
            if v not in dist or nd < dist[v]:
                dist[v] = nd
                ways[v] = ways[u]
                heapq.heappush(heap, (nd, v))
            elif nd == dist[v]:
                ways[v] += ways[u]
    return dist, ways


def is_min_unique(g: Digraph, source: Optional[int] = None) -> bool:
    """True iff every reachable pair has one minimum-weight path.

    With ``source`` given only pairs starting at that vertex are checked.
    """
    sources = range(g.n) if source is None else [source]
    for s in sources:
        _, ways = min_weight_path_counts(g, s)
        if any(c > 1 for c in ways.values()):
            return False
    return True


def random_weighting(g: Digraph, r: int, rng: random.Random) -> Digraph:
    """Copy of g with independent uniform weights in [1, r]."""
    edges = g.sorted_edges()
    return Digraph.from_edges(g.n, edges, [rng.randint(1, r) for _ in edges])


def path_weight_set(g: Digraph, s: int, t: int) -> Set[int]:
    """Set of total weights of s-t paths in a DAG.

    Equivalent to asking, for each length L, whether t is reachable from s by
    a path of exactly L unit edges in the subdivided graph.
    """
    order = topological_order(g)
    if order is None:
        raise InvariantError("graph must be acyclic")
    sums: List[Set[int]] = [set() for _ in range(g.n)]
    sums[s].add(0)
    for u in order:
        if sums[u]:
            for v in g.succ(u):
                wt = g.w(u, v)
                sums[v].update(x + wt for x in sums[u])
    return sums[t]


def count_paths_via_weights(d: LayeredDag, s: int, t: int, p_bound: int) -> PathCount:
    """Path count as the maximum number of distinct path weights over the family.

    Edges form the universe; for every i in [1, r) the weights i**j mod r are
    tried and the number of distinct achievable s-t path weights recorded.
    Some i separates all paths, so the maximum equals the path count as long
    as it does not exceed ``p_bound``.
    """
    g = d.base
    g.check_vertex(s, t)
    edges = g.sorted_edges()
    r = next_prime_above((len(edges) + 1) ** 2 * p_bound**2)
    if not reachable(g, s, t):
        return PathCount(0)
    best = 0
    for i in range(1, r):
        ws = power_weights(i, len(edges), r)
        h = Digraph.from_edges(g.n, edges, ws)
        best = max(best, len(path_weight_set(h, s, t)))
        if best > p_bound:
            raise InvariantError(f"more than p_bound={p_bound} distinct path weights")
        if best == p_bound:
            break
    return PathCount(best)


def count_paths_capped(g: Digraph, s: int, t: int, p: int) -> int:
    """min(number of simple s-t paths, p+1).

    On acyclic graphs the count is taken layer by layer over the unrolled
    graph (the s-t walks of length n-1 once t carries a loop), with every
    intermediate count capped at p+1. Cyclic graphs fall back to simple-path
    backtracking that stops after p+1 paths.
    """
    g.check_vertex(s, t)
    cap = p + 1
    if topological_order(g) is None:
        return count_simple_paths(g, s, t, budget=10**7, limit=cap)
    if s == t:
        return min(1, cap)
    n = g.n
    vec = [0] * n
    vec[s] = 1
    for _ in range(max(n - 1, 1)):
        nxt = [0] * n
        for u in range(n):
            if vec[u]:
                for v in g.succ(u):
                    nxt[v] = min(cap, nxt[v] + vec[u])
        if vec[t]:
            # the added loop at t keeps already-arrived walks in place
            nxt[t] = min(cap, nxt[t] + vec[t])
        vec = nxt
    return vec[t]

