import itertools
from collections import Counter

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ustsr.analysis import chi_square_uniform
from ustsr.graphs import SimpleGraph
from ustsr.oracles import brute_force_avoid_prob
from ustsr.sampling import (
    aldous_broder_tree,
    complete_adjacency,
    count_spanning_trees,
    enumerate_spanning_trees,
    laplacian_minor_det,
    make_rng,
    prufer_decode,
    prufer_encode,
    sample_ust_complete,
    trial_seed,
)


def is_spanning_tree(n, edges):
    h = nx.Graph()
    h.add_nodes_from(range(n))
    h.add_edges_from(edges)
    return len(edges) == n - 1 and nx.is_tree(h)


def test_decode_examples():
    assert prufer_decode((3, 3), 4).edges() == [(0, 3), (1, 3), (2, 3)]
    assert prufer_decode((1,), 3).edges() == [(0, 1), (1, 2)]
    assert prufer_decode((), 2).edges() == [(0, 1)]
    with pytest.raises(ValueError):
        prufer_decode((4,), 3)


@given(st.integers(3, 40).flatmap(lambda n: st.tuples(st.just(n), st.lists(st.integers(0, n - 1), min_size=n - 2, max_size=n - 2))))
def test_code_round_trip(case):
    n, seq = case
    t = prufer_decode(seq, n)
    assert is_spanning_tree(n, t.edges())
    assert prufer_encode(n, t.edges()) == tuple(seq)
    assert all(t.contains(a, b) and t.contains(b, a) for a, b in t.edges())


@pytest.mark.parametrize("n", range(2, 8))
def test_enumeration_is_cayley(n):
    trees = enumerate_spanning_trees(n)
    assert len(trees) == n ** (n - 2)
    assert len({tuple(t.edges()) for t in trees}) == n ** (n - 2)


def test_enumeration_limit():
    with pytest.raises(ValueError):
        enumerate_spanning_trees(9)


@pytest.mark.parametrize("n", [3, 4, 5])
@pytest.mark.parametrize("method", ["pruefer", "walk", "lazy"])
def test_samplers_are_uniform(n, method):
    rng = make_rng(100 + n)
    adj = complete_adjacency(n)
    draw = {
        "pruefer": lambda: sample_ust_complete(n, rng),
        "walk": lambda: aldous_broder_tree(adj, rng, check_connected=False),
        "lazy": lambda: aldous_broder_tree(adj, rng, lazy=True, check_connected=False),
    }[method]
    total = 10_000 * n ** (n - 2)
    counts = Counter(tuple(draw().edges()) for _ in range(total))
    cells = [tuple(t.edges()) for t in enumerate_spanning_trees(n)]
    assert set(counts) == set(cells)
    assert chi_square_uniform([counts[c] for c in cells]) > 1e-3


def test_walk_on_a_cycle_is_uniform():
    # a 4-cycle has 4 spanning trees, one per removed edge
    g = SimpleGraph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    rng = make_rng(9)
    counts = Counter(tuple(aldous_broder_tree(g, rng).edges()) for _ in range(8000))
    assert len(counts) == 4
    assert chi_square_uniform(list(counts.values())) > 1e-3


def test_walk_rejects_disconnected_graph():
    g = SimpleGraph.from_edges(4, [(0, 1), (2, 3)])
    with pytest.raises(ValueError):
        aldous_broder_tree(g, make_rng(0))


@given(st.integers(2, 300), st.integers(0, 2**32))
@settings(max_examples=40)
def test_sampled_trees_are_spanning(n, seed):
    t = sample_ust_complete(n, make_rng(seed))
    assert len(t.edges()) == n - 1 and is_spanning_tree(n, t.edges())
    assert int(t.degrees().sum()) == 2 * (n - 1)


def test_same_seed_same_tree():
    a = sample_ust_complete(50, make_rng(5)).edges()
    b = sample_ust_complete(50, make_rng(5)).edges()
    assert a == b


def test_trial_seeds_are_distinct():
    seeds = {trial_seed(7, i) for i in range(10_000)}
    assert len(seeds) == 10_000
    assert trial_seed(7, 0) == 7


@given(st.integers(2, 8), st.data())
@settings(max_examples=60, deadline=None)
def test_matrix_tree_against_rationals_and_networkx(n, data):
    pairs = list(itertools.combinations(range(n), 2))
    edges = data.draw(st.lists(st.sampled_from(pairs), unique=True))
    count = count_spanning_trees(n, edges)
    assert count == laplacian_minor_det(n, edges)
    h = nx.Graph()
    h.add_nodes_from(range(n))
    h.add_edges_from(edges)
    expected = round(nx.number_of_spanning_trees(h)) if nx.is_connected(h) else 0
    assert count == expected


def test_cayley_via_matrix_tree():
    for n in range(2, 12):
        assert count_spanning_trees(n, itertools.combinations(range(n), 2)) == n ** (n - 2)


@given(st.integers(2, 7), st.data())
@settings(max_examples=60, deadline=None)
def test_matrix_tree_against_enumeration(n, data):
    # trees inside the edge set are exactly the trees avoiding its complement
    pairs = list(itertools.combinations(range(n), 2))
    edges = set(data.draw(st.lists(st.sampled_from(pairs), unique=True)))
    inside = brute_force_avoid_prob(n, set(pairs) - edges) * n ** (n - 2)
    assert count_spanning_trees(n, edges) == inside
