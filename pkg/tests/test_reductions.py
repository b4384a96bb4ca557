import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logcount import Digraph, InvariantError, count_st_paths, reachable
from logcount.reductions import (
    TwoCnf,
    dstcon_to_unsat2cnf,
    dstcon_witness,
    implication_graph,
    literal_vertex,
    twosat_satisfiable,
    twosat_solve,
    unroll_to_sldag,
    vertex_literal,
)

import oracles

# x = 1, y = 2, z = 3
CONTRADICTION_PHI = TwoCnf(3, ((1, 2), (1, -2), (-1, 3), (-1, -3)))


def lit(v):
    return literal_vertex(v)


def test_unroll_single_edge():
    d, s2, t2 = unroll_to_sldag(Digraph.from_edges(2, [(0, 1)]), 0, 1)
    assert d.layer_count == 2
    assert count_st_paths(d, s2, t2) == 1


def test_unroll_two_cycle():
    d, s2, t2 = unroll_to_sldag(Digraph.from_edges(2, [(0, 1), (1, 0)]), 0, 1)
    assert count_st_paths(d, s2, t2) == 1


def test_unroll_random_matches_walks():
    rng = random.Random(11)
    for _ in range(40):
        n = 6
        edges = oracles.random_digraph(rng, n, 0.3)
        g = Digraph.from_edges(n, edges)
        s, t = 0, n - 1
        d, s2, t2 = unroll_to_sldag(g, s, t)
        looped = list(set(edges) | {(t, t)})
        assert count_st_paths(d, s2, t2) == oracles.walks(n, looped, s, t, n - 1)
        assert reachable(d, s2, t2) == (t in oracles.dfs_reach(n, edges, s))


def test_literal_vertex_roundtrip():
    for v in range(1, 6):
        for l in (v, -v):
            assert vertex_literal(literal_vertex(l)) == l


def test_implication_graph_contradiction():
    g = implication_graph(CONTRADICTION_PHI)
    # two vertices per variable; the 8 edges are one pair per clause
    assert g.n == 6 and len(g.edges) == 8
    # every literal reaches its negation
    for v in range(1, 4):
        for l in (v, -v):
            assert reachable(g, lit(l), lit(-l))


def test_implication_single_clause():
    g = implication_graph(TwoCnf(2, ((1, 2),)))
    assert g.edges == frozenset({(lit(-1), lit(2)), (lit(-2), lit(1))})


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5).flatmap(lambda v: st.tuples(st.just(v), st.lists(
    st.tuples(st.sampled_from([x for x in range(-v, v + 1) if x]), st.sampled_from([x for x in range(-v, v + 1) if x])),
    max_size=8))))
def test_implication_graph_properties(data):
    nv, clauses = data
    phi = TwoCnf(nv, tuple(clauses))
    g = implication_graph(phi)
    assert len(g.edges) <= 2 * len(clauses)
    for u, v in g.edges:
        assert g.has_edge(lit(-vertex_literal(v)), lit(-vertex_literal(u)))
    sol = twosat_solve(phi)
    want = oracles.brute_sat(nv, clauses)
    assert (sol is None) == (want is None)
    if sol is not None:
        assert phi.evaluate(sol)


def test_twosat_examples():
    assert not twosat_satisfiable(CONTRADICTION_PHI)
    assert twosat_satisfiable(TwoCnf(2, ((1, 2),)))


def test_twosat_random_12_vars():
    rng = random.Random(3)
    for _ in range(80):
        nc = rng.randint(5, 30)
        clauses = tuple(tuple(rng.choice([-1, 1]) * rng.randint(1, 12) for _ in range(2)) for _ in range(nc))
        phi = TwoCnf(12, clauses)
        assert twosat_satisfiable(phi) == (oracles.brute_sat(12, clauses) is not None)


def test_dstcon_seven_clause_formula():
    # s = 0 (x), v2 = 1, v3 = 2, t = 3
    g = Digraph.from_edges(4, [(0, 1), (1, 1), (1, 2), (1, 3), (2, 3)])
    phi = dstcon_to_unsat2cnf(g, 0, 3)
    x, v2, v3, y = 1, 2, 3, 4
    assert phi.clauses == ((-x, v2), (-v2, v2), (-v2, v3), (-v2, -x), (-v3, -x), (x, y), (x, -y))
    assert not twosat_satisfiable(phi)
    assert dstcon_witness(g, 0, 3) is None


def test_dstcon_edgeless():
    phi = dstcon_to_unsat2cnf(Digraph.from_edges(2, []), 0, 1)
    assert phi.clauses == ((1, 2), (1, -2))
    sol = twosat_solve(phi)
    assert sol is not None and sol[0] is True


def test_dstcon_rejects_equal_endpoints():
    with pytest.raises(InvariantError):
        dstcon_to_unsat2cnf(Digraph.from_edges(2, [(0, 1)]), 0, 0)


def test_dstcon_equivalence_random():
    rng = random.Random(5)
    for _ in range(60):
        n = rng.randint(2, 8)
        edges = oracles.random_digraph(rng, n, 0.25)
        g = Digraph.from_edges(n, edges)
        phi = dstcon_to_unsat2cnf(g, 0, n - 1)
        reach = (n - 1) in oracles.dfs_reach(n, edges, 0)
        assert (oracles.brute_sat(phi.variable_count, phi.clauses) is None) == reach
        assert twosat_satisfiable(phi) == (not reach)
        wit = dstcon_witness(g, 0, n - 1)
        assert (wit is None) == reach
