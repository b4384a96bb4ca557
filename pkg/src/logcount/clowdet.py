"""Division-free determinant via clow sequences.

Vertices of the ambient graph are ``0..n-1`` and edge (u, v) carries weight
``A[u][v]`` (zero entries are non-edges). A clow is a closed walk whose head,
its least vertex, occurs exactly once. A clow sequence lists clows with
strictly increasing heads and has sign (-1)^(length + number of clows).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from .errors import BudgetExceeded, InvariantError
from .graphs import Digraph, LayeredDag, adjacency_matrix, path_weight_sums
from .linalg import IntMatrix, det_bareiss

CLOW_BUDGET = 5

Ambient = Union[IntMatrix, Digraph]


def _weights(g: Ambient) -> Tuple[Tuple[int, ...], ...]:
    if isinstance(g, IntMatrix):
        g.require_square()
        return g.rows
    return tuple(tuple(r) for r in adjacency_matrix(g))


@dataclass(frozen=True)
class Clow:
    walk: Tuple[int, ...]

    def __post_init__(self) -> None:
        walk = tuple(self.walk)
        object.__setattr__(self, "walk", walk)
        if not walk:
            raise InvariantError("a clow needs at least one vertex")
        h = walk[0]
        if any(v <= h for v in walk[1:]):
            raise InvariantError(f"head {h} must be the unique minimum of {walk}")

    @property
    def head(self) -> int:
        return self.walk[0]

    def __len__(self) -> int:
        return len(self.walk)

    def edges(self) -> List[Tuple[int, int]]:
        w = self.walk
        return [(w[i], w[(i + 1) % len(w)]) for i in range(len(w))]

    def is_simple(self) -> bool:
        return len(set(self.walk)) == len(self.walk)


@dataclass(frozen=True)
class ClowSequence:
    clows: Tuple[Clow, ...]

    def __post_init__(self) -> None:
        clows = tuple(c if isinstance(c, Clow) else Clow(tuple(c)) for c in self.clows)
        object.__setattr__(self, "clows", clows)
        heads = [c.head for c in clows]
        if any(a >= b for a, b in zip(heads, heads[1:])):
            raise InvariantError(f"heads must increase strictly, got {heads}")

    @classmethod
    def of(cls, *walks: Sequence[int]) -> "ClowSequence":
        return cls(tuple(Clow(tuple(w)) for w in walks))

    @property
    def length(self) -> int:
        return sum(len(c) for c in self.clows)

    @property
    def k(self) -> int:
        return len(self.clows)

    @property
    def sign(self) -> int:
        return -1 if (self.length + self.k) % 2 else 1

    def weight(self, g: Ambient) -> int:
        a = _weights(g)
        w = 1
        for c in self.clows:
            for u, v in c.edges():
                w *= a[u][v]
        return w

    def is_valid_for(self, g: Ambient) -> bool:
        a = _weights(g)
        n = len(a)
        return all(
            0 <= u < n and 0 <= v < n and a[u][v] != 0 for c in self.clows for u, v in c.edges()
        )

    def is_cycle_cover(self, n: Optional[int] = None) -> bool:
        """Vertex-disjoint simple cycles (covering all n vertices when n is given)."""
        seen: set = set()
        for c in self.clows:
            if not c.is_simple() or seen & set(c.walk):
                return False
            seen |= set(c.walk)
        return n is None or len(seen) == n

    def walks(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(c.walk for c in self.clows)


def _clows_with_head(a: Sequence[Sequence[int]], h: int, max_len: int) -> Iterator[Tuple[int, ...]]:
    """Every clow with head h and length <= max_len using nonzero entries."""
    n = len(a)
    stack: List[Tuple[int, ...]] = [(h,)]
    while stack:
        walk = stack.pop()
        u = walk[-1]
        if a[u][h]:
            yield walk
        if len(walk) < max_len:
            for v in range(n - 1, h, -1):
                if a[u][v]:
                    stack.append(walk + (v,))


def enumerate_clow_sequences(g: Ambient, length: Optional[int] = None) -> Iterator[ClowSequence]:
    """All clow sequences of the given total length (default n) over nonzero edges."""
    a = _weights(g)
    n = len(a)
    ell = n if length is None else length
    cache: Dict[Tuple[int, int], List[Tuple[int, ...]]] = {}

    def clows(h: int, max_len: int) -> List[Tuple[int, ...]]:
        key = (h, max_len)
        if key not in cache:
            cache[key] = list(_clows_with_head(a, h, max_len))
        return cache[key]

    def rec(min_head: int, remaining: int, acc: Tuple[Tuple[int, ...], ...]) -> Iterator[ClowSequence]:
        if remaining == 0:
            yield ClowSequence(tuple(Clow(w) for w in acc))
            return
        for h in range(min_head, n):
            for w in clows(h, remaining):
                yield from rec(h + 1, remaining - len(w), acc + (w,))

    yield from rec(0, ell, ())


def det_via_clows(a: IntMatrix, budget: int = CLOW_BUDGET) -> int:
    """Signed sum of weights over all clow sequences of length n."""
    n = a.n
    if n > budget:
        raise BudgetExceeded(f"clow enumeration limited to n <= {budget}, got {n}")
    if n == 0:
        return 1
    return sum(W.sign * W.weight(a) for W in enumerate_clow_sequences(a))


def _disjoint_cycles_suffix(clows: Sequence[Tuple[int, ...]], start: int) -> bool:
    seen: set = set()
    for w in clows[start:]:
        if len(set(w)) != len(w) or seen & set(w):
            return False
        seen |= set(w)
    return True


def involution_phi(W: ClowSequence, g: Optional[Ambient] = None) -> ClowSequence:
    """The sign-reversing, weight-preserving pairing on clow sequences.

    Take the least i such that the clows after C_i are vertex-disjoint simple
    cycles (none exists for a set of disjoint cycles, which is a fixed
    point). Walk C_i from its head. If the walk first meets a vertex v of a
    later clow C_j, splice C_j (rotated to start at v) into C_i at v. If it
    first closes a simple cycle, cut that cycle out and insert it as a new
    clow in head order.
    """
    if g is not None and not W.is_valid_for(g):
        raise InvariantError("clow sequence uses a non-edge of the ambient graph")
    clows = list(W.walks())
    m = len(clows)
    j = m
    while j > 0 and _disjoint_cycles_suffix(clows, j - 1):
        j -= 1
    if j == 0:
        return W
    i = j - 1
    walk = clows[i]
    owner = {v: q for q in range(j, m) for v in clows[q]}
    first: Dict[int, int] = {}
    for pos, v in enumerate(walk):
        if v in owner:
            q = owner[v]
            other = clows[q]
            k = other.index(v)
            rot = other[k:] + other[:k]
            clows[i] = walk[:pos] + rot + walk[pos:]
            del clows[q]
            return ClowSequence(tuple(Clow(w) for w in clows))
        if v in first:
            p0 = first[v]
            cyc = walk[p0:pos]
            k = cyc.index(min(cyc))
            cyc = cyc[k:] + cyc[:k]
            clows[i] = walk[:p0] + walk[pos:]
            clows.append(cyc)
            head_sorted = clows[: i + 1] + sorted(clows[i + 1 :], key=lambda c: c[0])
            return ClowSequence(tuple(Clow(w) for w in head_sorted))
        first[v] = pos
    raise AssertionError("no event while traversing a non-cycle clow")  # unreachable


# ---------------------------------------------------------------------------
# The layered graph H_A


def _ha_index(n: int, ell: int, p: int, h: int, u: int, i: int) -> int:
    return 3 + ((p * n + (h - 1)) * n + (u - 1)) * ell + i


@dataclass(frozen=True)
class HAGraph:
    dag: LayeredDag
    s: int
    t_plus: int
    t_minus: int
    n: int
    length: int

    def index(self, p: int, h: int, u: int, i: int) -> int:
        """Vertex id of [p, h, u, i] with p in {0,1}, h,u in 1..n, i in 0..length-1."""
        return _ha_index(self.n, self.length, p, h, u, i)

    def label(self, v: int) -> Union[str, Tuple[int, int, int, int]]:
        if v < 3:
            return ("s", "t+", "t-")[v]
        x = v - 3
        x, i = divmod(x, self.length)
        x, u = divmod(x, self.n)
        p, h = divmod(x, self.n)
        return (p, h + 1, u + 1, i)


def build_HA(a: IntMatrix, length: Optional[int] = None) -> HAGraph:
    """Layered graph whose s->t+ minus s->t- path weights sum to the signed
    weight of all clow sequences of the given length (default n).

    Layers: s, then [*, *, *, i] for i = 0..length-1, then t+ and t-. Edges are
    included structurally, including those whose weight entry is zero.
    """
    n = a.n
    if n == 0:
        raise InvariantError("H_A needs n >= 1")
    ell = n if length is None else length
    if not 1 <= ell <= n:
        raise InvariantError(f"length must be in [1, {n}]")
    A = a.rows
    total = 3 + 2 * n * n * ell
    layer = [0] * total
    layer[0] = 1
    layer[1] = layer[2] = ell + 2

    def idx(p: int, h: int, u: int, i: int) -> int:
        return _ha_index(n, ell, p, h, u, i)

    edges: Dict[Tuple[int, int], int] = {}
    b = ell % 2
    for p in (0, 1):
        for h in range(1, n + 1):
            for u in range(1, n + 1):
                for i in range(ell):
                    x = idx(p, h, u, i)
                    layer[x] = i + 2
                    if i + 1 < ell:
                        for v in range(h + 1, n + 1):
                            edges[(x, idx(p, h, v, i + 1))] = A[u - 1][v - 1]
                        for h2 in range(h + 1, n + 1):
                            edges[(x, idx(1 - p, h2, h2, i + 1))] = A[u - 1][h - 1]
                    else:
                        edges[(x, 1 if p == 1 else 2)] = A[u - 1][h - 1]
    for h in range(1, n + 1):
        edges[(0, idx(b, h, h, 0))] = 1
    dag = LayeredDag(Digraph(total, frozenset(edges), edges), tuple(layer), ell + 2)
    return HAGraph(dag, 0, 1, 2, n, ell)


def ha_path_sums(hg: HAGraph) -> Tuple[int, int]:
    """(W+, W-) by path-weight dynamic programming over the materialised graph."""
    acc = path_weight_sums(hg.dag, hg.s)
    return acc[hg.t_plus], acc[hg.t_minus]


def _signed_clow_sum(a: IntMatrix, ell: int) -> int:
    """W+ - W- for H_A(ell), computed layer by layer without building the graph.

    State (p, h, u) at layer i: parity p, current head h, current vertex u.
    """
    n = a.n
    A = a.rows
    b = ell % 2
    cur: Dict[Tuple[int, int, int], int] = {(b, h, h): 1 for h in range(n)}
    for _ in range(ell - 1):
        nxt: Dict[Tuple[int, int, int], int] = {}
        for (p, h, u), val in cur.items():
            if not val:
                continue
            row = A[u]
            for v in range(h + 1, n):
                w = row[v]
                if w:
                    key = (p, h, v)
                    nxt[key] = nxt.get(key, 0) + val * w
            close = row[h]
            if close:
                for h2 in range(h + 1, n):
                    key = (1 - p, h2, h2)
                    nxt[key] = nxt.get(key, 0) + val * close
        cur = nxt
    total = 0
    for (p, h, u), val in cur.items():
        w = A[u][h]
        if w and val:
            total += val * w if p == 1 else -val * w
    return total


def det_via_HA(a: IntMatrix) -> int:
    """det(A) = (sum of s->t+ path weights) - (sum of s->t- path weights)."""
    n = a.n
    if n == 0:
        raise InvariantError("H_A needs n >= 1")
    return _signed_clow_sum(a, n)


def charpoly_coeffs(a: IntMatrix) -> List[int]:
    """Coefficients [c_0, ..., c_n] of det(x I - A).

    c_{n-l} = (-1)^l (W+ - W-) on the truncated graph with l clow layers and
    initial parity l mod 2; c_n = 1.
    """
    n = a.n
    if n == 0:
        raise InvariantError("charpoly needs n >= 1")
    c = [0] * (n + 1)
    c[n] = 1
    for ell in range(1, n + 1):
        c[n - ell] = (-1) ** ell * _signed_clow_sum(a, ell)
    return c


def rank_of(a: IntMatrix) -> int:
    """Rank over Q as ncols minus the multiplicity of 0 as a root of charpoly(A^T A).

    A^T A is symmetric, so that multiplicity equals its nullity, which is
    the nullity of A.
    """
    if a.nrows == 0 or a.ncols == 0:
        return 0
    ata = a.transpose() @ a
    c = charpoly_coeffs(ata)
    nullity = next(r for r, x in enumerate(c) if x != 0)
    return ata.n - nullity


def det_oracle(a: IntMatrix) -> int:
    return det_bareiss(a)


__all__ = [
    "Clow",
    "ClowSequence",
    "HAGraph",
    "IntMatrix",
    "build_HA",
    "charpoly_coeffs",
    "det_oracle",
    "det_via_HA",
    "det_via_clows",
    "enumerate_clow_sequences",
    "ha_path_sums",
    "involution_phi",
    "rank_of",
]
