import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logcount import Digraph, InvariantError, LayeredDag, count_st_paths, reachable, walk_count
from logcount.graphs import (
    PathCount,
    bfs_distances,
    count_simple_paths,
    path_weight_sums,
    topological_order,
)
from logcount.errors import BudgetExceeded

import oracles


def diamond() -> LayeredDag:
    return LayeredDag.from_layers([[0], [1, 2], [3]], [(0, 1), (0, 2), (1, 3), (2, 3)])


@st.composite
def digraphs(draw, max_n=7, loops=False):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(n) if loops or u != v]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return n, edges


def test_digraph_rejects_duplicates_and_range():
    with pytest.raises(InvariantError):
        Digraph.from_edges(2, [(0, 1), (0, 1)])
    with pytest.raises(InvariantError):
        Digraph.from_edges(2, [(0, 2)])
    with pytest.raises(InvariantError):
        Digraph.from_edges(2, [(0, 1)], [1, 2])


def test_layered_dag_rejects_skip_edge():
    with pytest.raises(InvariantError):
        LayeredDag.from_layers([[0], [1], [2]], [(0, 2)])
    with pytest.raises(InvariantError):
        LayeredDag.from_layers([[0], [1]], [(1, 0)])


def test_path_count_nonnegative():
    assert PathCount(3) == 3
    with pytest.raises(InvariantError):
        PathCount(-1)


def test_reachable_trivial():
    assert reachable(Digraph.from_edges(2, [(0, 1)]), 0, 1)
    assert not reachable(Digraph.from_edges(2, []), 0, 1)


def test_count_diamond_and_ladder():
    assert count_st_paths(diamond(), 0, 3) == 2
    layers = [[0], [1, 2], [3, 4], [5]]
    edges = [(0, 1), (0, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 5), (4, 5)]
    assert count_st_paths(LayeredDag.from_layers(layers, edges), 0, 5) == 4


def test_walk_count_trivial():
    g = Digraph.from_edges(3, [(0, 1)])
    assert walk_count(g, 2, 2, 0) == 1
    assert walk_count(g, 0, 1, 0) == 0
    assert walk_count(g, 0, 1, 1) == 1


@settings(max_examples=60, deadline=None)
@given(digraphs(max_n=8))
def test_reachable_matches_dfs(gr):
    n, edges = gr
    g = Digraph.from_edges(n, edges)
    want = oracles.dfs_reach(n, edges, 0)
    assert {v for v in range(n) if reachable(g, 0, v)} == want


@settings(max_examples=60, deadline=None)
@given(digraphs(max_n=6))
def test_simple_paths_match_enumeration(gr):
    n, edges = gr
    g = Digraph.from_edges(n, edges)
    t = n - 1
    assert count_st_paths(g, 0, t) == len(oracles.simple_paths(n, edges, 0, t))


@settings(max_examples=60, deadline=None)
@given(digraphs(max_n=5, loops=True), st.integers(0, 5))
def test_walk_count_matches_matrix_power(gr, length):
    n, edges = gr
    g = Digraph.from_edges(n, edges)
    adj = [[int((u, v) in set(edges)) for v in range(n)] for u in range(n)]
    power = oracles.matpow(adj, length)
    for t in range(n):
        assert walk_count(g, 0, t, length) == power[0][t] == oracles.walks(n, edges, 0, t, length)


@settings(max_examples=40, deadline=None)
@given(digraphs(max_n=5, loops=True), st.integers(1, 4))
def test_walk_count_first_step_additive(gr, length):
    n, edges = gr
    g = Digraph.from_edges(n, edges)
    t = n - 1
    assert walk_count(g, 0, t, length) == sum(walk_count(g, v, t, length - 1) for v in g.succ(0))


def test_layered_dp_exhaustive_small():
    for widths in ([1, 2, 2], [2, 2, 2], [1, 1, 2]):
        for layers, edges in oracles.all_layered(widths):
            d = LayeredDag.from_layers(layers, edges)
            for s in layers[0]:
                for t in range(d.n):
                    want = len(oracles.simple_paths(d.n, edges, s, t))
                    assert count_st_paths(d, s, t) == want
                    assert reachable(d, s, t) == (want > 0)


def test_layered_dp_random_larger():
    rng = random.Random(7)
    for _ in range(40):
        layers, edges = oracles.random_layered(rng, [1, 3, 3, 3, 2], 0.5)
        d = LayeredDag.from_layers(layers, edges)
        t = layers[-1][-1]
        assert count_st_paths(d, 0, t) == len(oracles.simple_paths(d.n, edges, 0, t))


def test_bfs_and_topological_order():
    g = Digraph.from_edges(4, [(0, 1), (1, 2), (0, 2), (2, 3)])
    assert bfs_distances(g, 0) == {0: 0, 1: 1, 2: 1, 3: 2}
    order = topological_order(g)
    assert order is not None and all(order.index(u) < order.index(v) for u, v in g.edges)
    assert topological_order(Digraph.from_edges(2, [(0, 1), (1, 0)])) is None


def test_simple_path_budget():
    n = 9
    g = Digraph.from_edges(n, [(u, v) for u in range(n) for v in range(n) if u != v])
    with pytest.raises(BudgetExceeded):
        count_simple_paths(g, 0, n - 1, budget=1000)


def test_path_weight_sums_products():
    d = LayeredDag.from_layers([[0], [1, 2], [3]], [(0, 1), (0, 2), (1, 3), (2, 3)], [2, 3, 5, 7])
    assert path_weight_sums(d, 0)[3] == 2 * 5 + 3 * 7
