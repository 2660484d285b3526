import itertools

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from ustsr.graphs import (
    PatternGraph,
    SimpleGraph,
    cycle_decomposition,
    is_central,
    is_hamiltonian_cycle_witness,
    is_perfect_matching,
    local_connectivity,
    read_edge_list,
    verify_h_cover,
    verify_h_factor,
    vertex_connectivity,
    vertex_connectivity_at_least,
    write_edge_list,
)
from ustsr.oracles import brute_force_vertex_connectivity


@st.composite
def graphs(draw, max_n=8):
    n = draw(st.integers(2, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True))
    return SimpleGraph.from_edges(n, chosen)


def test_add_edge_reports_novelty_and_rejects_loops():
    g = SimpleGraph(4)
    assert g.add_edge(0, 1)
    assert not g.add_edge(1, 0)
    with pytest.raises(ValueError):
        g.add_edge(2, 2)
    with pytest.raises(ValueError):
        g.add_edge(0, 4)
    assert g.m == 1 and g.degree(0) == g.degree(1) == 1


@given(st.integers(2, 12), st.lists(st.tuples(st.integers(0, 11), st.integers(0, 11)), max_size=60))
def test_degree_bookkeeping(n, ops):
    g = SimpleGraph(n)
    for a, b in ops:
        if a < n and b < n and a != b:
            g.add_edge(a, b)
    assert int(g.degrees.sum()) == 2 * g.m
    assert all(g.degree(v) == len(g.neighbors(v)) for v in range(n))
    assert all(g.has_edge(b, a) for a, b in g.edges())
    assert list(g.degree_counts) == [int((g.degrees == d).sum()) for d in range(n + 1)]
    assert g.min_degree == int(g.degrees.min()) and g.max_degree == int(g.degrees.max())


def test_sparse_mode_agrees_with_dense():
    import numpy as np

    a, b = SimpleGraph(30), SimpleGraph(30, dense=False)
    rng = np.random.default_rng(1)
    for _ in range(80):
        x, y = rng.choice(30, 2, replace=False)
        a.add_edge(x, y)
        b.add_edge(x, y)
    us, vs = rng.integers(0, 30, 200), rng.integers(0, 30, 200)
    assert (a.has_edges(us, vs) == b.has_edges(us, vs)).all()


def test_edge_list_round_trip(tmp_path):
    g = SimpleGraph.from_edges(5, [(0, 1), (3, 4), (1, 4)])
    write_edge_list(g, tmp_path / "g.txt")
    assert (tmp_path / "g.txt").read_text().splitlines()[0] == "5 3"
    h = read_edge_list(tmp_path / "g.txt")
    assert list(h.edges()) == list(g.edges())


def test_matching_validator():
    path = SimpleGraph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    assert is_perfect_matching(path, [(0, 1), (2, 3)])
    assert not is_perfect_matching(path, [(1, 2)])
    assert not is_perfect_matching(path, [(0, 1), (1, 2)])
    assert is_perfect_matching(path, [(1, 2)], vertices=[1, 2])


def test_hamilton_validator():
    c5 = SimpleGraph.from_edges(5, [(i, (i + 1) % 5) for i in range(5)])
    assert is_hamiltonian_cycle_witness(c5, [0, 1, 2, 3, 4])
    assert is_hamiltonian_cycle_witness(c5, [2, 1, 0, 4, 3])
    assert not is_hamiltonian_cycle_witness(c5, [0, 2, 1, 3, 4])
    assert not is_hamiltonian_cycle_witness(c5, [0, 1, 2, 3])


def test_factor_and_cover_validators():
    tri = PatternGraph.complete(3)
    g = SimpleGraph.from_edges(7, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (5, 6), (6, 4)])
    assert verify_h_factor(g, tri, [(0, 1, 2), (3, 4, 5)])
    assert not verify_h_factor(g, tri, [(0, 1, 2)])
    assert not verify_h_factor(g, tri, [(0, 1, 2), (2, 4, 5)])
    cover = [(0, 1, 2)] * 3 + [(3, 4, 5)] * 3 + [(4, 5, 6)]
    assert verify_h_cover(g, tri, cover)
    assert not verify_h_cover(g, tri, cover[:6] + [(3, 4, 5)])


def test_cycle_decomposition_examples():
    m = [(0, 1), (2, 3)]
    assert sorted(map(len, cycle_decomposition(m, m))) == [2, 2]
    cycles = cycle_decomposition([(0, 1), (2, 3)], [(0, 3), (2, 1)])
    assert [len(c) for c in cycles] == [4]
    with pytest.raises(ValueError):
        cycle_decomposition([(0, 1), (0, 3)], [(0, 1), (2, 3)])


@given(st.integers(1, 7), st.randoms(use_true_random=False))
def test_cycle_decomposition_properties(m, rnd):
    evens = list(range(0, 2 * m, 2))
    odds = list(range(1, 2 * m, 2))
    p1, p2 = odds[:], odds[:]
    rnd.shuffle(p1)
    rnd.shuffle(p2)
    m1, m2 = list(zip(evens, p1)), list(zip(evens, p2))
    cycles = cycle_decomposition(m1, m2)
    assert sum(map(len, cycles)) == 2 * m
    assert all(len(c) % 2 == 0 for c in cycles)
    s1 = {frozenset(e) for e in m1}
    s2 = {frozenset(e) for e in m2}
    for c in cycles:
        steps = [frozenset((c[i], c[(i + 1) % len(c)])) for i in range(len(c))]
        if len(c) == 2:
            assert steps[0] in s1 and steps[0] in s2
        else:
            assert all(e in (s1 if i % 2 == 0 else s2) for i, e in enumerate(steps))


def test_is_central():
    assert is_central(PatternGraph.star(3)) == 0
    assert is_central(PatternGraph.complete(3)) is None
    assert is_central(PatternGraph.path(3)) == 0
    assert is_central(PatternGraph.cycle(5)) is None
    # two triangles hanging off a common vertex through bridges
    h = PatternGraph(7, ((0, 1), (1, 2), (2, 3), (3, 1), (0, 4), (4, 5), (5, 6), (6, 4)))
    assert is_central(h) == 0


@pytest.mark.parametrize(
    "h",
    [
        PatternGraph.complete(3),
        PatternGraph.complete(4),
        PatternGraph(4, ((0, 1), (1, 2), (2, 3), (3, 0), (0, 2))),
        PatternGraph(5, ((0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2))),
    ],
)
def test_two_edge_connected_patterns_with_triangles_are_not_central(h):
    assert is_central(h) is None


@given(
    st.sampled_from(["k2", "p3", "triangle", "c4", "star3"]),
    st.integers(0, 12),
    st.randoms(use_true_random=False),
)
def test_factor_implies_edge_count_bound(name, extra, rnd):
    h = PatternGraph.named(name)
    n = h.order * rnd.randint(1, 6) + rnd.randint(0, h.order - 1)
    perm = list(range(n))
    rnd.shuffle(perm)
    copies = [perm[i * h.order : (i + 1) * h.order] for i in range(n // h.order)]
    g = SimpleGraph(n)
    for c in copies:
        for a, b in h.edges:
            g.add_edge(c[a], c[b])
    for _ in range(extra):
        a, b = rnd.sample(range(n), 2)
        g.add_edge(a, b)
    assert verify_h_factor(g, h, copies)
    assert g.m >= (n // h.order) * h.size


def test_pattern_parsing():
    assert PatternGraph.named("triangle").size == 3
    assert PatternGraph.named("star4").order == 5
    assert PatternGraph.named("p3").is_tree()
    with pytest.raises(ValueError):
        PatternGraph.named("wheel")


def test_connectivity_examples():
    k5 = SimpleGraph.from_edges(5, itertools.combinations(range(5), 2))
    assert vertex_connectivity_at_least(k5, 4)
    assert not vertex_connectivity_at_least(k5, 5)
    bowtie = SimpleGraph.from_edges(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])
    assert vertex_connectivity_at_least(bowtie, 1)
    assert not vertex_connectivity_at_least(bowtie, 2)
    c6 = SimpleGraph.from_edges(6, [(i, (i + 1) % 6) for i in range(6)])
    assert local_connectivity(c6, 0, 3) == 2
    with pytest.raises(ValueError):
        local_connectivity(c6, 0, 1)


@settings(max_examples=150, deadline=None)
@given(graphs())
def test_connectivity_matches_separator_enumeration(g):
    kappa = brute_force_vertex_connectivity(g)
    assert vertex_connectivity(g) == kappa
    assert vertex_connectivity_at_least(g, kappa)
    assert not vertex_connectivity_at_least(g, kappa + 1)


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=10))
def test_connectivity_matches_networkx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    expected = nx.node_connectivity(h) if not g.is_complete() else g.n - 1
    assert vertex_connectivity(g) == expected
