"""Computation-tree interpreter for nondeterministic counting procedures.

A :class:`GuessProgram` is an explicit state machine. ``step(state)`` either
returns a :class:`Leaf` (accept or reject, optionally with an output value) or
a non-empty sequence of successors, one per nondeterministic choice. A
successor may itself be a ``Leaf``. States must be hashable and steps pure, so
a path is fully determined by its choice string.

``run_all_paths`` counts leaves of the full computation tree. By default it
memoises per state, which counts tree leaves exactly while only visiting each
configuration once; ``memo=False`` walks the tree path by path and serves as a
cross-check.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from math import comb
from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple, Union

from .errors import BudgetExceeded, InvariantError, NotMinUnique
from .graphs import (
    Digraph,
    LayeredDag,
    coreachable_set,
    count_st_paths,
    reachable_set,
)


@dataclass(frozen=True)
class Leaf:
    accept: bool
    output: Hashable = None


ACCEPT = Leaf(True)
REJECT = Leaf(False)
UNKNOWN = "?"

StepResult = Union[Leaf, Sequence[Hashable]]


@dataclass(frozen=True)
class GuessProgram:
    start: Hashable
    step: Callable[[Hashable], StepResult]
    max_depth: int = 100_000
    max_fanout: int = 10_000
    max_states: int = 5_000_000
    name: str = ""


@dataclass
class PathStats:
    acc: int = 0
    rej: int = 0
    outputs: Counter = field(default_factory=Counter)

    @property
    def gap(self) -> int:
        return self.acc - self.rej

    @property
    def leaves(self) -> int:
        return self.acc + self.rej

    def definite_outputs(self) -> Dict[Hashable, int]:
        """Output counts excluding the ``"?"`` marker."""
        return {k: v for k, v in self.outputs.items() if k != UNKNOWN}


def _leaf_stats(leaf: Leaf) -> Tuple[int, int, Dict[Hashable, int]]:
    out = {} if leaf.output is None else {leaf.output: 1}
    return (1, 0, out) if leaf.accept else (0, 1, out)


def _children(p: GuessProgram, state: Hashable) -> Union[Leaf, Tuple[Hashable, ...]]:
    r = p.step(state)
    if isinstance(r, Leaf):
        return r
    kids = tuple(r)
    if not kids:
        raise InvariantError(f"state {state!r} has no successors and is not a leaf")
    if len(kids) > p.max_fanout:
        raise BudgetExceeded(f"fan-out {len(kids)} exceeds limit {p.max_fanout}")
    return kids


class _Frame:
    __slots__ = ("state", "kids", "i", "acc", "rej", "out")

    def __init__(self, state: Hashable, kids: Tuple[Hashable, ...]) -> None:
        self.state = state
        self.kids = kids
        self.i = 0
        self.acc = 0
        self.rej = 0
        self.out: Dict[Hashable, int] = {}

    def add(self, res: Tuple[int, int, Dict[Hashable, int]]) -> None:
        self.acc += res[0]
        self.rej += res[1]
        for k, v in res[2].items():
            self.out[k] = self.out.get(k, 0) + v


def _run_memo(p: GuessProgram) -> PathStats:
    results: Dict[Hashable, Tuple[int, int, Dict[Hashable, int]]] = {}
    root = p.start
    first = root if isinstance(root, Leaf) else _children(p, root)
    if isinstance(first, Leaf):
        a, r, o = _leaf_stats(first)
        return PathStats(a, r, Counter(o))
    on_path = {root}
    stack = [_Frame(root, first)]
    while stack:
        fr = stack[-1]
        if fr.i < len(fr.kids):
            c = fr.kids[fr.i]
            fr.i += 1
            if isinstance(c, Leaf):
                fr.add(_leaf_stats(c))
                continue
            hit = results.get(c)
            if hit is not None:
                fr.add(hit)
                continue
            if c in on_path:
                raise BudgetExceeded(f"computation does not terminate: state {c!r} repeats")
            kids = _children(p, c)
            if isinstance(kids, Leaf):
                res = _leaf_stats(kids)
                results[c] = res
                fr.add(res)
                continue
            if len(stack) >= p.max_depth:
                raise BudgetExceeded(f"path length exceeds step budget {p.max_depth}")
            if len(results) >= p.max_states:
                raise BudgetExceeded(f"more than {p.max_states} distinct states")
            on_path.add(c)
            stack.append(_Frame(c, kids))
        else:
            res = (fr.acc, fr.rej, fr.out)
            results[fr.state] = res
            on_path.discard(fr.state)
            stack.pop()
            if stack:
                stack[-1].add(res)
    a, r, o = results[root]
    return PathStats(a, r, Counter(o))


def _run_tree(p: GuessProgram) -> PathStats:
    stats = PathStats()
    stack: List[Tuple[Hashable, int]] = [(p.start, 0)]
    while stack:
        state, depth = stack.pop()
        node = state if isinstance(state, Leaf) else _children(p, state)
        if isinstance(node, Leaf):
            if node.accept:
                stats.acc += 1
            else:
                stats.rej += 1
            if node.output is not None:
                stats.outputs[node.output] += 1
            if stats.leaves > p.max_states:
                raise BudgetExceeded(f"more than {p.max_states} leaves")
            continue
        if depth >= p.max_depth:
            raise BudgetExceeded(f"path length exceeds step budget {p.max_depth}")
        for c in reversed(node):
            stack.append((c, depth + 1))
    return stats


def run_all_paths(p: GuessProgram, memo: bool = True) -> PathStats:
    """Exact accept/reject/output statistics over every computation path."""
    return _run_memo(p) if memo else _run_tree(p)


def exists_accepting(p: GuessProgram) -> bool:
    """Early-exit search for an accepting leaf."""
    seen = set()
    stack: List[Tuple[Hashable, int]] = [(p.start, 0)]
    while stack:
        state, depth = stack.pop()
        if isinstance(state, Leaf):
            if state.accept:
                return True
            continue
        if state in seen:
            continue
        seen.add(state)
        if len(seen) > p.max_states:
            raise BudgetExceeded(f"more than {p.max_states} distinct states")
        node = _children(p, state)
        if isinstance(node, Leaf):
            if node.accept:
                return True
            continue
        if depth >= p.max_depth:
            raise BudgetExceeded(f"path length exceeds step budget {p.max_depth}")
        for c in reversed(node):
            stack.append((c, depth + 1))
    return False


# ---------------------------------------------------------------------------
# Inductive counting


def _check_source(d: LayeredDag, s: int) -> None:
    d.base.check_vertex(s)
    if d.layer[s] != 1:
        raise InvariantError(f"source {s} must lie in layer 1, found layer {d.layer[s]}")


class _Inductive:
    """Shared stepping for the counting phase.

    State ``("C", i, vi, ui, d, flag, cnext, c, hist, w)`` computes the number
    of reachable vertices in layer i+1 (0-based) given count ``c`` for layer i.
    ``vi`` indexes the candidate v, ``ui`` the witness u, ``d`` counts verified
    witnesses, ``flag`` records an edge u->v, and ``w`` is the walk position
    while verifying u (None when not walking).
    """

    def __init__(self, d: LayeredDag, s: int) -> None:
        self.d = d
        self.s = s
        self.layers = d.layers()
        self.layer0 = [li - 1 for li in d.layer]

    def walk(self, w: int, u: int, make: Callable[[int], Hashable]) -> Sequence[Hashable]:
        """One guessed step of a walk from w toward the layer of u."""
        nxt = self.layers[self.layer0[w] + 1]
        return [make(x) if self.d.base.has_edge(w, x) else REJECT for x in nxt]

    def counting_step(self, st: tuple, on_done: Callable[[int, int, tuple], StepResult]) -> StepResult:
        _, i, vi, ui, dd, flag, cnext, c, hist, w = st
        cur, nxt = self.layers[i], self.layers[i + 1]
        if vi == len(nxt):
            return on_done(i + 1, cnext, hist + (cnext,))
        v = nxt[vi]
        if w is None:
            if ui == len(cur):
                if dd != c:
                    return REJECT
                return [("C", i, vi + 1, 0, 0, False, cnext + int(flag), c, hist, None)]
            return [
                ("C", i, vi, ui + 1, dd, flag, cnext, c, hist, None),
                ("C", i, vi, ui, dd, flag, cnext, c, hist, self.s),
            ]
        u = cur[ui]
        if self.layer0[w] == i:
            if w != u:
                return REJECT
            f2 = flag or self.d.base.has_edge(u, v)
            return [("C", i, vi, ui + 1, dd + 1, f2, cnext, c, hist, None)]
        return self.walk(w, u, lambda x: ("C", i, vi, ui, dd, flag, cnext, c, hist, x))


def nonreach_nd(d: LayeredDag, s: int, t: int, alpha: Optional[int] = None) -> GuessProgram:
    """Nondeterministic non-reachability by inductive counting.

    Accepting paths exist iff t is not reachable from s. The count of
    reachable vertices in t's layer is computed by the counting phase unless
    ``alpha`` supplies it; a wrong ``alpha`` voids the guarantee.
    """
    _check_source(d, s)
    d.base.check_vertex(t)
    ind = _Inductive(d, s)
    lam = ind.layer0[t]
    final_layer = ind.layers[lam]

    def final_start(c: int) -> tuple:
        return ("F", 0, 0, c, None)

    def on_done(layer: int, cnext: int, hist: tuple) -> StepResult:
        if layer == lam:
            return [final_start(cnext)]
        return [("C", layer, 0, 0, 0, False, 0, cnext, (), None)]

    def step(st: tuple) -> StepResult:
        if st[0] == "C":
            return ind.counting_step(st, on_done)
        _, ui, dd, c, w = st
        if w is None:
            if ui == len(final_layer):
                return ACCEPT if dd == c else REJECT
            return [("F", ui + 1, dd, c, None), ("F", ui, dd, c, s)]
        u = final_layer[ui]
        if ind.layer0[w] == lam:
            if w != u or u == t:
                return REJECT
            return [("F", ui + 1, dd + 1, c, None)]
        return ind.walk(w, u, lambda x: ("F", ui, dd, c, x))

    if alpha is not None or lam == 0:
        start = final_start(1 if alpha is None else alpha)
    else:
        start = ("C", 0, 0, 0, 0, False, 0, 1, (), None)
    return GuessProgram(start, step, name="nonreach")


def layer_count_program(d: LayeredDag, s: int) -> GuessProgram:
    """Counting phase over all layers; accepting leaves output the count tuple."""
    _check_source(d, s)
    ind = _Inductive(d, s)
    last = d.layer_count - 1

    def on_done(layer: int, cnext: int, hist: tuple) -> StepResult:
        if layer == last:
            return Leaf(True, hist)
        return [("C", layer, 0, 0, 0, False, 0, cnext, hist, None)]

    if last == 0:
        return GuessProgram(Leaf(True, (1,)), lambda st: st, name="layer-count")
    start = ("C", 0, 0, 0, 0, False, 0, 1, (1,), None)
    return GuessProgram(start, lambda st: ind.counting_step(st, on_done), name="layer-count")


def inductive_layer_counts(d: LayeredDag, s: int) -> List[int]:
    """Reachable-vertex count per layer, obtained from the counting machine.

    Every accepting path of the machine carries the same count vector; any
    disagreement is reported as an internal error.
    """
    stats = run_all_paths(layer_count_program(d, s))
    values = [k for k in stats.outputs]
    if stats.acc == 0 or len(values) != 1:
        raise AssertionError(f"inductive counting produced {values!r}")
    return list(values[0])


# ---------------------------------------------------------------------------
# Unambiguous reachability on min-unique graphs


def ul_predicate(g: Digraph, s: int, v: int, k: int, c_k: int, sigma_k: int) -> GuessProgram:
    """Shortest-path predicate "d(v) <= k" for an unweighted min-unique graph.

    For each vertex x the machine guesses whether d(x) <= k; if so it guesses a
    length l <= k and a walk of length l from s, failing with "?" unless the
    walk ends at x. It answers only when the number of confirmed vertices is
    ``c_k`` and their length sum is ``sigma_k``. Branches whose running count
    or sum already exceeds the target, or whose count can no longer reach it,
    answer "?" at once; such branches could never answer otherwise.
    """
    g.check_vertex(s, v)
    n = g.n
    unknown = Leaf(False, UNKNOWN)

    def step(st: tuple) -> StepResult:
        tag, x, count, total, found = st[:5]
        if count > c_k or total > sigma_k or count + (n - x) < c_k:
            return unknown
        if tag == "X":
            if x == n:
                if count == c_k and total == sigma_k:
                    return Leaf(True, found)
                return unknown
            skip = ("X", x + 1, count, total, found)
            return [skip] + [("W", x, count, total, found, l, s, 0) for l in range(k + 1)]
        l, w, j = st[5:]
        if j == l:
            if w != x:
                return unknown
            return [("X", x + 1, count + 1, total + l, found or x == v)]
        nxt = g.succ(w)
        if not nxt:
            return unknown
        return [("W", x, count, total, found, l, y, j + 1) for y in nxt]

    return GuessProgram(("X", 0, 0, 0, False), step, name="ul-predicate")


@dataclass
class ULTrace:
    reachable: bool
    predicate_calls: int
    definite_paths: List[int]
    distance_counts: List[Tuple[int, int]]


def _predicate_value(g: Digraph, s: int, v: int, k: int, c: int, sig: int, trace: ULTrace) -> bool:
    stats = run_all_paths(ul_predicate(g, s, v, k, c, sig))
    definite = stats.definite_outputs()
    n_def = sum(definite.values())
    trace.predicate_calls += 1
    trace.definite_paths.append(n_def)
    if n_def != 1:
        raise InvariantError(
            f"predicate d({v}) <= {k} has {n_def} definite paths; inputs are not min-unique"
        )
    return bool(next(iter(definite)))


def ul_reach_trace(g: Digraph, s: int, t: int) -> ULTrace:
    """Reachability on a min-unique weighted graph with full ambiguity bookkeeping.

    Edges are subdivided according to their weights, then the counts c_k and
    sigma_k are built up one distance at a time using only predicate calls.
    Iteration stops early once a distance level adds no vertex, since no
    later level can.
    """
    from .isolation import expand_weighted_edges, is_min_unique

    g.check_vertex(s, t)
    if g.weight is not None and not is_min_unique(g, s):
        raise NotMinUnique("weighting is not min-unique with respect to the source")
    h = expand_weighted_edges(g) if g.weight is not None else g
    if g.weight is None and not is_min_unique(h, s):
        raise NotMinUnique("graph is not min-unique with respect to the source")
    trace = ULTrace(False, 0, [], [(1, 0)])
    c, sig = 1, 0
    k_final = 0
    for k in range(1, h.n):
        le = [_predicate_value(h, s, x, k - 1, c, sig, trace) for x in range(h.n)]
        new = [x for x in range(h.n) if not le[x] and any(le[u] for u in h.pred(x))]
        if not new:
            k_final = k - 1
            break
        c += len(new)
        sig += k * len(new)
        trace.distance_counts.append((c, sig))
        k_final = k
    trace.reachable = _predicate_value(h, s, t, k_final, c, sig, trace)
    return trace


def ul_reach(g: Digraph, s: int, t: int) -> bool:
    """Decide s-t reachability in a min-unique graph through unambiguous guessing."""
    return ul_reach_trace(g, s, t).reachable


# ---------------------------------------------------------------------------
# Choosing k distinct paths


def _check_endpoints(d: LayeredDag, s: int, t: int, k: int) -> None:
    _check_source(d, s)
    d.base.check_vertex(t)
    if k < 1:
        raise InvariantError("k must be positive")


def sharplcfl(d: LayeredDag, s: int, t: int, k: int) -> GuessProgram:
    """Machine whose accepting paths correspond to k-subsets of s-t paths.

    The machine extends k paths in lock step, one layer at a time. Path heads
    are kept in lexicographically non-decreasing order: paths that agree so
    far ("tied") must pick non-decreasing successors. Every guessed vertex is
    checked to reach t by a deterministic subcall. It accepts at t's layer iff
    no two paths are still tied, so each accepting path names a strictly
    increasing k-tuple of distinct paths and acc = C(f, k).
    """
    _check_endpoints(d, s, t, k)
    good = coreachable_set(d, t)
    layer0 = [li - 1 for li in d.layer]
    lam = layer0[t]
    base = d.base

    def step(st: tuple) -> StepResult:
        r, j, heads, ties, new = st
        if r == lam:
            return REJECT if any(ties) else ACCEPT
        if j == k:
            ties2 = tuple(ties[q] and new[q] == new[q + 1] for q in range(k - 1))
            return [(r + 1, 0, new, ties2, ())]
        out: List[Hashable] = []
        for x in base.succ(heads[j]):
            if x not in good:
                out.append(REJECT)
            elif j > 0 and ties[j - 1] and x < new[j - 1]:
                out.append(REJECT)
            else:
                out.append((r, j + 1, heads, ties, new + (x,)))
        return out or REJECT

    if s not in good:
        return GuessProgram(REJECT, step, name="sharplcfl")
    start = (layer0[s], 0, (s,) * k, (True,) * (k - 1), ())
    return GuessProgram(start, step, name="sharplcfl")


def sharplcfl_rowwise(d: LayeredDag, s: int, t: int, k: int) -> GuessProgram:
    """Row-wise double inductive counting variant of the k-path machine.

    Kept for comparison only: its accepting-path count does not equal
    C(f, k) in general (a diamond with k = 1 yields 4 instead of 2), because
    successor choices made in one row are re-guessed independently in the
    next. Requires s in the first layer and t in the last.
    """
    _check_endpoints(d, s, t, k)
    if d.layer[t] != d.layer_count:
        raise InvariantError("the row-wise variant expects t in the last layer")
    rows = d.layers()
    nrows = d.layer_count
    from_s = reachable_set(d, s)
    to_t = coreachable_set(d, t)
    npaths = {v: count_st_paths(d, s, v) for v in range(d.n)}
    base = d.base

    # state: (tag, lam, phi, eta, p1, e1, p2, e2, wi, sigma, aux)
    def row_end(lam: int, phi: int, eta: int, p1: int, e1: int, p2: int, e2: int) -> StepResult:
        if lam + 1 < nrows and (e1 != eta or p1 < phi):
            return REJECT
        if lam + 1 == nrows and (e1 != eta or p2 != k):
            return REJECT
        if lam + 1 > nrows - 1:
            return ACCEPT
        return [("V", lam + 1, p2, e2, 0, 0, 0, 0, 0, 0, None)]

    def step(st: tuple) -> StepResult:
        tag, lam, phi, eta, p1, e1, p2, e2, wi, sigma, aux = st
        row = rows[lam - 1]
        if tag == "V":
            if wi == len(row):
                return row_end(lam, phi, eta, p1, e1, p2, e2)
            skip = ("V", lam, phi, eta, p1, e1, p2, e2, wi + 1, 0, None)
            w = row[wi]
            if not (w in from_s and w in to_t):
                return [skip, REJECT]
            e1n = e1 + 1
            if e1n > eta:
                return [skip, REJECT]
            return [skip, ("N", lam, phi, eta, p1, e1n, p2, e2, wi, 0, 0)]
        w = row[wi]
        if tag == "N":
            nbrs = base.succ(w)
            ri = aux
            if ri == len(nbrs):
                if sigma == 0 or sigma > k:
                    return REJECT
                return [("A", lam, phi, eta, p1, e1, p2, e2, wi, sigma, None)]
            skip = ("N", lam, phi, eta, p1, e1, p2, e2, wi, sigma, ri + 1)
            rho = nbrs[ri]
            sig2 = sigma + 1
            if rho not in to_t:
                return [skip, REJECT]
            if (phi == k or p2 == k) and sig2 >= 2:
                return [skip, REJECT]
            return [skip, ("N", lam, phi, eta, p1, e1, p2, e2, wi, sig2, ri + 1)]
        if tag == "A":
            paths_to = npaths[w]
            psi = max(1, phi - p1) if paths_to > phi - p1 else paths_to
            return [("B", lam, phi, eta, p1 + a, e1, p2, e2, wi, sigma, a) for a in range(1, psi + 1)]
        # tag == "B": choose beta
        alpha = aux
        out: List[Hashable] = []
        for beta in range(sigma + 1):
            p2n = alpha * beta + p2
            e2n = e2 + beta
            if e2n == 0 or ((phi == k or p2n > k) and e2n > eta):
                out.append(REJECT)
                continue
            if p2n > k:
                p2n = k
            out.append(("V", lam, phi, eta, p1, e1, p2n, e2n, wi + 1, 0, None))
        return out

    if nrows == 1:
        return GuessProgram(ACCEPT, step, name="sharplcfl-rowwise")
    return GuessProgram(("V", 1, 1, 1, 0, 0, 0, 0, 0, 0, None), step, name="sharplcfl-rowwise")


def binomial_target(d: LayeredDag, s: int, t: int, k: int) -> int:
    """C(f, k) for f the number of s-t paths."""
    return comb(int(count_st_paths(d, s, t)), k)
