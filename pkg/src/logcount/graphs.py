"""Directed graphs, layered DAGs and exact path/walk counting.

Vertices are dense integers ``0..n-1``. Counts are Python ints, so they never
overflow.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import BudgetExceeded, InvariantError

Edge = Tuple[int, int]


class PathCount(int):
    """A nonnegative exact path count."""

    def __new__(cls, value: int = 0) -> "PathCount":
        if value < 0:
            raise InvariantError(f"path count must be nonnegative, got {value}")
        return super().__new__(cls, value)


@dataclass(frozen=True, eq=False)
class Digraph:
    """Directed graph without parallel edges, optionally with integer weights."""

    vertex_count: int
    edges: frozenset
    weight: Optional[Mapping[Edge, int]] = None
    _succ: Tuple[Tuple[int, ...], ...] = field(init=False, repr=False)
    _pred: Tuple[Tuple[int, ...], ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        n = self.vertex_count
        if n < 0:
            raise InvariantError("vertex_count must be nonnegative")
        edges = frozenset(self.edges)
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InvariantError(f"edge ({u}, {v}) out of range for {n} vertices")
        if self.weight is not None:
            w = dict(self.weight)
            if set(w) != edges:
                raise InvariantError("weight map must cover exactly the edge set")
            object.__setattr__(self, "weight", w)
        object.__setattr__(self, "edges", edges)
        succ: List[List[int]] = [[] for _ in range(n)]
        pred: List[List[int]] = [[] for _ in range(n)]
        for u, v in sorted(edges):
            succ[u].append(v)
            pred[v].append(u)
        object.__setattr__(self, "_succ", tuple(tuple(x) for x in succ))
        object.__setattr__(self, "_pred", tuple(tuple(x) for x in pred))

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[Sequence[int]],
        weights: Optional[Iterable[int]] = None,
    ) -> "Digraph":
        """Build from an edge list; duplicates are an error, not a silent merge."""
        elist = [(int(e[0]), int(e[1])) for e in edges]
        if len(set(elist)) != len(elist):
            raise InvariantError("parallel edges are not allowed")
        wmap = None
        if weights is not None:
            wl = list(weights)
            if len(wl) != len(elist):
                raise InvariantError("one weight per edge required")
            wmap = dict(zip(elist, wl))
        return cls(n, frozenset(elist), wmap)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Digraph):
            return NotImplemented
        return (
            self.vertex_count == other.vertex_count
            and self.edges == other.edges
            and self.weight == other.weight
        )

    def __hash__(self) -> int:
        return hash((self.vertex_count, self.edges))

    @property
    def n(self) -> int:
        return self.vertex_count

    def succ(self, u: int) -> Tuple[int, ...]:
        return self._succ[u]

    def pred(self, v: int) -> Tuple[int, ...]:
        return self._pred[v]

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.edges

    def w(self, u: int, v: int) -> int:
        """Weight of edge (u, v); unweighted graphs have unit weights."""
        if (u, v) not in self.edges:
            raise InvariantError(f"no edge ({u}, {v})")
        return 1 if self.weight is None else self.weight[(u, v)]

    def sorted_edges(self) -> List[Edge]:
        return sorted(self.edges)

    def check_vertex(self, *vs: int) -> None:
        for v in vs:
            if not (isinstance(v, int) and 0 <= v < self.vertex_count):
                raise InvariantError(f"vertex {v!r} out of range")

    def with_edges(self, extra: Iterable[Edge], weight: int = 1) -> "Digraph":
        """Return a copy with extra edges added (existing ones kept as is)."""
        edges = set(self.edges)
        w = None if self.weight is None else dict(self.weight)
        for e in extra:
            if e not in edges:
                edges.add(e)
                if w is not None:
                    w[e] = weight
        return Digraph(self.vertex_count, frozenset(edges), w)

    def has_self_loop(self) -> bool:
        return any(u == v for u, v in self.edges)

    def is_acyclic(self) -> bool:
        return topological_order(self) is not None


@dataclass(frozen=True, eq=False)
class LayeredDag:
    """A digraph whose edges all go from layer i to layer i+1 (layers 1..L)."""

    base: Digraph
    layer: Tuple[int, ...]
    layer_count: int

    def __post_init__(self) -> None:
        layer = tuple(self.layer)
        object.__setattr__(self, "layer", layer)
        if len(layer) != self.base.vertex_count:
            raise InvariantError("layer map must cover every vertex")
        for v, li in enumerate(layer):
            if not 1 <= li <= self.layer_count:
                raise InvariantError(f"vertex {v} has layer {li} outside [1, {self.layer_count}]")
        for u, v in self.base.edges:
            if layer[v] != layer[u] + 1:
                raise InvariantError(
                    f"edge ({u}, {v}) goes from layer {layer[u]} to layer {layer[v]}"
                )

    @classmethod
    def from_layers(
        cls,
        layers: Sequence[Sequence[int]],
        edges: Iterable[Sequence[int]],
        weights: Optional[Iterable[int]] = None,
    ) -> "LayeredDag":
        """Build from explicit vertex lists per layer (layer 1 first)."""
        n = sum(len(x) for x in layers)
        lay = [0] * n
        seen = set()
        for i, vs in enumerate(layers, start=1):
            for v in vs:
                if v in seen or not 0 <= v < n:
                    raise InvariantError(f"bad or repeated vertex {v} in layers")
                seen.add(v)
                lay[v] = i
        return cls(Digraph.from_edges(n, edges, weights), tuple(lay), len(layers))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LayeredDag):
            return NotImplemented
        return (self.base, self.layer, self.layer_count) == (
            other.base,
            other.layer,
            other.layer_count,
        )

    def __hash__(self) -> int:
        return hash((self.base, self.layer))

    @property
    def n(self) -> int:
        return self.base.vertex_count

    def vertices_in(self, i: int) -> List[int]:
        """Vertices of layer i (1-based), ascending."""
        return [v for v, li in enumerate(self.layer) if li == i]

    def layers(self) -> List[List[int]]:
        out: List[List[int]] = [[] for _ in range(self.layer_count)]
        for v, li in enumerate(self.layer):
            out[li - 1].append(v)
        return out

    def order(self) -> List[int]:
        """A topological order (by layer, then index)."""
        return sorted(range(self.n), key=lambda v: (self.layer[v], v))


Graphish = Union[Digraph, LayeredDag]


def _base(g: Graphish) -> Digraph:
    return g.base if isinstance(g, LayeredDag) else g


def topological_order(g: Digraph) -> Optional[List[int]]:
    """Kahn's algorithm; None when the graph has a cycle."""
    indeg = [len(g.pred(v)) for v in range(g.n)]
    queue = deque(v for v in range(g.n) if indeg[v] == 0)
    out: List[int] = []
    while queue:
        u = queue.popleft()
        out.append(u)
        for v in g.succ(u):
            indeg[v] -= 1
            if indeg[v] == 0:
                queue.append(v)
    return out if len(out) == g.n else None


def reachable_set(g: Graphish, s: int) -> set:
    """All vertices reachable from s (including s)."""
    b = _base(g)
    b.check_vertex(s)
    seen = {s}
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for v in b.succ(u):
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


def coreachable_set(g: Graphish, t: int) -> set:
    """All vertices that can reach t (including t)."""
    b = _base(g)
    b.check_vertex(t)
    seen = {t}
    queue = deque([t])
    while queue:
        v = queue.popleft()
        for u in b.pred(v):
            if u not in seen:
                seen.add(u)
                queue.append(u)
    return seen


def reachable(g: Graphish, s: int, t: int) -> bool:
    """True iff a directed path (empty when s == t) leads from s to t."""
    _base(g).check_vertex(s, t)
    return t in reachable_set(g, s)


def bfs_distances(g: Graphish, s: int) -> Dict[int, int]:
    """Unweighted hop distances from s to every reachable vertex."""
    b = _base(g)
    b.check_vertex(s)
    dist = {s: 0}
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for v in b.succ(u):
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def _count_dag_dp(d: LayeredDag, s: int, t: int) -> int:
    ways = [0] * d.n
    ways[s] = 1
    for u in d.order():
        if ways[u]:
            for v in d.base.succ(u):
                ways[v] += ways[u]
    return ways[t]


def count_simple_paths(
    g: Digraph, s: int, t: int, budget: int = 2_000_000, limit: Optional[int] = None
) -> int:
    """Count simple s-t paths by backtracking.

    ``budget`` caps visited search nodes; ``limit`` stops the search as soon
    as that many paths have been found.
    """
    g.check_vertex(s, t)
    if s == t:
        return 1
    on_path = [False] * g.n
    on_path[s] = True
    count = 0
    visited = 0
    # explicit stack of (vertex, successor iterator)
    stack = [(s, iter(g.succ(s)))]
    while stack:
        u, it = stack[-1]
        nxt = next(it, None)
        if nxt is None:
            on_path[u] = False
            stack.pop()
            continue
        if on_path[nxt]:
            continue
        visited += 1
        if visited > budget:
            raise BudgetExceeded(f"simple-path enumeration exceeded {budget} nodes")
        if nxt == t:
            count += 1
            if limit is not None and count >= limit:
                return count
            continue
        on_path[nxt] = True
        stack.append((nxt, iter(g.succ(nxt))))
    return count


def count_st_paths(g: Graphish, s: int, t: int, budget: int = 2_000_000) -> PathCount:
    """Number of directed s-t paths.

    Layered DAGs use layer-ordered dynamic programming. General digraphs count
    simple paths by backtracking, which is exponential and guarded by ``budget``.
    """
    _base(g).check_vertex(s, t)
    if isinstance(g, LayeredDag):
        return PathCount(_count_dag_dp(g, s, t))
    return PathCount(count_simple_paths(g, s, t, budget))


def walk_count(g: Graphish, s: int, t: int, length: int) -> int:
    """Number of walks with exactly ``length`` edges from s to t."""
    b = _base(g)
    b.check_vertex(s, t)
    if length < 0:
        raise InvariantError("walk length must be nonnegative")
    vec = [0] * b.n
    vec[s] = 1
    for _ in range(length):
        nxt = [0] * b.n
        for u in range(b.n):
            if vec[u]:
                for v in b.succ(u):
                    nxt[v] += vec[u]
        vec = nxt
    return vec[t]


def path_weight_sums(d: LayeredDag, s: int) -> List[int]:
    """For every vertex v, the sum over s-v paths of the product of edge weights."""
    d.base.check_vertex(s)
    acc = [0] * d.n
    acc[s] = 1
    for u in d.order():
        a = acc[u]
        if a:
            for v in d.base.succ(u):
                acc[v] += a * d.base.w(u, v)
    return acc


def adjacency_matrix(g: Graphish) -> List[List[int]]:
    """Dense adjacency matrix holding edge weights (1 for unweighted)."""
    b = _base(g)
    m = [[0] * b.n for _ in range(b.n)]
    for u, v in b.edges:
        m[u][v] = b.w(u, v)
    return m
