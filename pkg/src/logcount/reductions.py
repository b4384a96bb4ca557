"""Many-one reductions among reachability problems and 2-CNF satisfiability.

Literals use the DIMACS convention: variables are ``1..variable_count`` and a
literal is ``+v`` or ``-v``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import InvariantError
from .graphs import Digraph, LayeredDag, coreachable_set

Clause = Tuple[int, int]


@dataclass(frozen=True)
class TwoCnf:
    variable_count: int
    clauses: Tuple[Clause, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        for c in self.clauses:
            if len(c) != 2:
                raise InvariantError(f"clause {c} does not have exactly two literals")
            for lit in c:
                if lit == 0 or abs(lit) > self.variable_count:
                    raise InvariantError(f"literal {lit} out of range")

    def evaluate(self, assignment: Sequence[bool]) -> bool:
        """assignment[v-1] is the value of variable v."""
        def val(lit: int) -> bool:
            x = assignment[abs(lit) - 1]
            return x if lit > 0 else not x

        return all(val(a) or val(b) for a, b in self.clauses)

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.variable_count} {len(self.clauses)}"]
        lines += [f"{a} {b} 0" for a, b in self.clauses]
        return "\n".join(lines) + "\n"


def literal_vertex(lit: int) -> int:
    """Vertex of a literal in the implication graph: +v -> 2(v-1), -v -> 2(v-1)+1."""
    return 2 * (abs(lit) - 1) + (0 if lit > 0 else 1)


def vertex_literal(v: int) -> int:
    var = v // 2 + 1
    return var if v % 2 == 0 else -var


def unroll_to_sldag(g: Digraph, s: int, t: int) -> Tuple[LayeredDag, int, int]:
    """Unroll g (plus a loop at t) into n layers of n vertices.

    Vertex (i, j) of the result gets index i*n + j. The s'-t' path count equals
    the number of length n-1 walks from s to t in g with the loop (t, t) added.
    """
    n = g.vertex_count
    if n < 2:
        raise InvariantError("unrolling needs at least two vertices")
    g.check_vertex(s, t)
    e2 = set(g.edges) | {(t, t)}
    edges = [
        (i * n + a, (i + 1) * n + b) for i in range(n - 1) for a, b in sorted(e2)
    ]
    layer = tuple(v // n + 1 for v in range(n * n))
    d = LayeredDag(Digraph(n * n, frozenset(edges)), layer, n)
    return d, s, (n - 1) * n + t


def implication_graph(phi: TwoCnf) -> Digraph:
    """Clause (a or b) yields edges -a -> b and -b -> a."""
    edges = set()
    for a, b in phi.clauses:
        edges.add((literal_vertex(-a), literal_vertex(b)))
        edges.add((literal_vertex(-b), literal_vertex(a)))
    return Digraph(2 * phi.variable_count, frozenset(edges))


def _scc(g: Digraph) -> List[int]:
    """Tarjan's algorithm, iterative. Component ids come out in reverse
    topological order of the condensation."""
    n = g.n
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    comp = [-1] * n
    stack: List[int] = []
    counter = 0
    ncomp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            succ = g.succ(v)
            recursed = False
            while i < len(succ):
                w = succ[i]
                i += 1
                if index[w] == -1:
                    work.append((v, i))
                    work.append((w, 0))
                    recursed = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if recursed:
                continue
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return comp


def twosat_solve(phi: TwoCnf) -> Optional[Tuple[bool, ...]]:
    """A verified satisfying assignment, or None when unsatisfiable.

    Unsatisfiable exactly when some x and -x share a strongly connected
    component of the implication graph, i.e. x ~> -x and -x ~> x.
    """
    g = implication_graph(phi)
    comp = _scc(g)
    assignment = []
    for v in range(1, phi.variable_count + 1):
        cp, cn = comp[literal_vertex(v)], comp[literal_vertex(-v)]
        if cp == cn:
            return None
        # Tarjan ids are reverse topological: a smaller id sits later
        assignment.append(cp < cn)
    result = tuple(assignment)
    if not phi.evaluate(result):
        raise AssertionError("internal error: 2-SAT witness failed verification")
    return result


def twosat_satisfiable(phi: TwoCnf) -> bool:
    return twosat_solve(phi) is not None


def _dstcon_varmap(g: Digraph, s: int, t: int) -> Tuple[Dict[int, int], int]:
    """Literal for each vertex (s -> x, t -> -x, others fresh) and the y variable."""
    lit = {s: 1, t: -1}
    nxt = 2
    for v in range(g.n):
        if v not in (s, t):
            lit[v] = nxt
            nxt += 1
    return lit, nxt


def dstcon_to_unsat2cnf(g: Digraph, s: int, t: int) -> TwoCnf:
    """A 2-CNF that is unsatisfiable iff t is reachable from s.

    Each edge (u, v) becomes the clause (-u or v) under the literal map, and
    (x or y) and (x or -y) force x to be true.
    """
    g.check_vertex(s, t)
    if s == t:
        raise InvariantError("source and target must differ")
    lit, y = _dstcon_varmap(g, s, t)
    # a self-loop yields a tautology (-v or v); kept so the clause list mirrors E
    clauses = [(-lit[u], lit[v]) for u, v in g.sorted_edges()]
    clauses += [(1, y), (1, -y)]
    return TwoCnf(y, tuple(clauses))


def dstcon_witness(g: Digraph, s: int, t: int) -> Optional[Tuple[bool, ...]]:
    """Assignment for dstcon_to_unsat2cnf(g, s, t) when t is unreachable.

    Vertices that can reach t are set false, all others true; x and y are true.
    Returns None if t is reachable (no assignment exists).
    """
    phi = dstcon_to_unsat2cnf(g, s, t)
    back = coreachable_set(g, t)
    if s in back:
        return None
    lit, y = _dstcon_varmap(g, s, t)
    values = [True] * y
    for v, l in lit.items():
        if v in (s, t):
            continue
        values[l - 1] = v not in back
    result = tuple(values)
    if not phi.evaluate(result):
        raise AssertionError("internal error: reachability witness failed verification")
    return result
