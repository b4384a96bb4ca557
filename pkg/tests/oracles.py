"""Brute-force reference implementations. Nothing here imports logcount."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from math import prod
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

Edge = Tuple[int, int]


def adjacency(n: int, edges: Sequence[Edge]) -> List[List[int]]:
    out: List[List[int]] = [[] for _ in range(n)]
    for u, v in edges:
        out[u].append(v)
    return out


def dfs_reach(n: int, edges: Sequence[Edge], s: int) -> Set[int]:
    adj = adjacency(n, edges)
    seen = {s}
    todo = [s]
    while todo:
        u = todo.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                todo.append(v)
    return seen


def simple_paths(n: int, edges: Sequence[Edge], s: int, t: int) -> List[Tuple[int, ...]]:
    """All simple s-t paths by exhaustive extension."""
    adj = adjacency(n, edges)
    found: List[Tuple[int, ...]] = []

    def go(path: List[int]) -> None:
        u = path[-1]
        if u == t:
            found.append(tuple(path))
            return
        for v in adj[u]:
            if v not in path:
                path.append(v)
                go(path)
                path.pop()

    go([s])
    return found


def walks(n: int, edges: Sequence[Edge], s: int, t: int, length: int) -> int:
    adj = adjacency(n, edges)

    def go(u: int, left: int) -> int:
        if left == 0:
            return int(u == t)
        return sum(go(v, left - 1) for v in adj[u])

    return go(s, length)


def bfs_levels(n: int, edges: Sequence[Edge], s: int) -> Dict[int, int]:
    adj = adjacency(n, edges)
    dist = {s: 0}
    frontier = [s]
    while frontier:
        nxt = []
        for u in frontier:
            for v in adj[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    nxt.append(v)
        frontier = nxt
    return dist


def dijkstra_naive(n: int, wedges: Dict[Edge, int], s: int) -> Dict[int, int]:
    """Bellman-Ford style relaxation; fine for tiny graphs."""
    inf = float("inf")
    dist: Dict[int, float] = {v: inf for v in range(n)}
    dist[s] = 0
    for _ in range(n):
        for (u, v), w in wedges.items():
            if dist[u] + w < dist[v]:
                dist[v] = dist[u] + w
    return {v: int(d) for v, d in dist.items() if d < inf}


# ---------------------------------------------------------------------------
# SAT


def brute_sat(nvars: int, clauses: Sequence[Tuple[int, ...]]) -> Optional[Tuple[bool, ...]]:
    """Truth-table search. Bit a of a mask stands for assignment a (variable v true iff bit v-1 of a)."""
    full = (1 << (1 << nvars)) - 1
    true_set = []
    for v in range(nvars):
        m = 0
        for a in range(1 << nvars):
            if a >> v & 1:
                m |= 1 << a
        true_set.append(m)

    def lit_set(l: int) -> int:
        m = true_set[abs(l) - 1]
        return m if l > 0 else full ^ m

    alive = full
    for c in clauses:
        cm = 0
        for l in c:
            cm |= lit_set(l)
        alive &= cm
        if not alive:
            return None
    a = (alive & -alive).bit_length() - 1
    return tuple(bool(a >> v & 1) for v in range(nvars))


# ---------------------------------------------------------------------------
# Linear algebra over Q


def det_leibniz(a: Sequence[Sequence[int]]) -> int:
    n = len(a)
    total = 0
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        total += (-1) ** inv * prod(a[i][perm[i]] for i in range(n))
    return total


def det_fraction(a: Sequence[Sequence[int]]) -> int:
    """Gaussian elimination over Fractions."""
    m = [[Fraction(x) for x in r] for r in a]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    assert det.denominator == 1
    return int(det)


def rank_fraction(a: Sequence[Sequence[int]]) -> int:
    m = [[Fraction(x) for x in r] for r in a]
    rank = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        piv = next((r for r in range(rank, len(m)) if m[r][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][c] != 0:
                f = m[r][c] / m[rank][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


def charpoly_interpolated(a: Sequence[Sequence[int]]) -> List[int]:
    """Coefficients [c_0..c_n] of det(xI - A) by evaluation at 0..n and Lagrange interpolation."""
    n = len(a)
    xs = list(range(n + 1))
    ys = [det_fraction([[(k if i == j else 0) - a[i][j] for j in range(n)] for i in range(n)]) for k in xs]
    coeffs = [Fraction(0)] * (n + 1)
    for i, xi in enumerate(xs):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, xj in enumerate(xs):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for d in range(len(basis) - 1):
                basis[d] -= xj * basis[d + 1]
            denom *= xi - xj
        for d in range(n + 1):
            coeffs[d] += ys[i] * basis[d] / denom
    assert all(c.denominator == 1 for c in coeffs)
    return [int(c) for c in coeffs]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> List[List[int]]:
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def matpow(a: Sequence[Sequence[int]], m: int) -> List[List[int]]:
    n = len(a)
    out = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(m):
        out = matmul(out, a)
    return out


# ---------------------------------------------------------------------------
# Clow sequences, enumerated straight from the definition


def clow_sequences(n: int, length: int) -> Iterator[Tuple[Tuple[int, ...], ...]]:
    """All head-ordered clow sequences of the given total length on vertices 0..n-1."""

    def clows_from(h: int, max_len: int) -> Iterator[Tuple[int, ...]]:
        for ln in range(1, max_len + 1):
            for rest in itertools.product(range(h + 1, n), repeat=ln - 1):
                yield (h,) + rest

    def rec(min_head: int, left: int) -> Iterator[Tuple[Tuple[int, ...], ...]]:
        if left == 0:
            yield ()
            return
        for h in range(min_head, n):
            for c in clows_from(h, left):
                for tail in rec(h + 1, left - len(c)):
                    yield (c,) + tail

    yield from rec(0, length)


def clow_weight(a: Sequence[Sequence[int]], seq: Sequence[Tuple[int, ...]]) -> int:
    w = 1
    for c in seq:
        for i in range(len(c)):
            w *= a[c[i]][c[(i + 1) % len(c)]]
    return w


def clow_sign(seq: Sequence[Tuple[int, ...]]) -> int:
    return (-1) ** (sum(map(len, seq)) + len(seq))


def is_cycle_cover(seq: Sequence[Tuple[int, ...]], n: int) -> bool:
    vs = [v for c in seq for v in c]
    return sorted(vs) == list(range(n))


# ---------------------------------------------------------------------------
# Random instance generators


def random_digraph(rng: random.Random, n: int, p: float, loops: bool = False) -> List[Edge]:
    return [(u, v) for u in range(n) for v in range(n) if (loops or u != v) and rng.random() < p]


def random_layered(rng: random.Random, widths: Sequence[int], p: float) -> Tuple[List[List[int]], List[Edge]]:
    layers, nxt = [], 0
    for w in widths:
        layers.append(list(range(nxt, nxt + w)))
        nxt += w
    edges = [(u, v) for a, b in zip(layers, layers[1:]) for u in a for v in b if rng.random() < p]
    return layers, edges


def all_layered(widths: Sequence[int]) -> Iterator[Tuple[List[List[int]], List[Edge]]]:
    layers, nxt = [], 0
    for w in widths:
        layers.append(list(range(nxt, nxt + w)))
        nxt += w
    slots = [(u, v) for a, b in zip(layers, layers[1:]) for u in a for v in b]
    for mask in range(1 << len(slots)):
        yield layers, [e for i, e in enumerate(slots) if mask >> i & 1]


def random_matrix(rng: random.Random, n: int, lo: int = -3, hi: int = 3, cols: Optional[int] = None) -> List[List[int]]:
    return [[rng.randint(lo, hi) for _ in range(cols or n)] for _ in range(n)]
