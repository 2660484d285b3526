"""Self-checks exposed by ``ustsr verify``: formulas, samplers, validators."""

from __future__ import annotations

import itertools
from collections import Counter
from typing import Callable

import numpy as np

from .analysis import (
    alternating_cycle_expectation,
    biclique_complement_tree_count,
    bipartite_avoid_prob,
    chi_square_uniform,
    clique_avoid_prob,
    expected_cycle_count,
)
from .graphs import SimpleGraph, is_hamiltonian_cycle_witness, is_perfect_matching, vertex_connectivity
from .oracles import biclique_edges, brute_force_avoid_prob, brute_force_vertex_connectivity, clique_edges, exact_cycle_expectations
from .sampling import aldous_broder_tree, complete_adjacency, count_spanning_trees, make_rng, sample_ust_complete

Check = tuple[str, bool, str]


def formulas(seed: int = 0) -> list[Check]:
    out = []
    ok = all(
        clique_avoid_prob(n, k, exact=True) == brute_force_avoid_prob(n, clique_edges(k))
        for n in range(2, 7)
        for k in range(1, n)
    )
    out.append(("clique avoidance vs enumeration, n<=6", ok, ""))
    ok = all(
        bipartite_avoid_prob(n, k, l, exact=True) == brute_force_avoid_prob(n, biclique_edges(n, k, l))
        for n in range(2, 7)
        for k in range(1, n)
        for l in range(1, n - k + 1)
    )
    out.append(("biclique avoidance vs enumeration, n<=6", ok, ""))
    bad = []
    for n in range(2, 10):
        for k in range(1, n):
            for l in range(1, n - k + 1):
                edges = set(itertools.combinations(range(n), 2)) - set(biclique_edges(n, k, l))
                if count_spanning_trees(n, edges) != biclique_complement_tree_count(n, k, l):
                    bad.append((n, k, l))
    out.append(("matrix-tree count of K_n minus biclique, n<=9", not bad, str(bad[:3]) if bad else ""))
    ok = all(
        exact_cycle_expectations(n)[i] == expected_cycle_count(i) == alternating_cycle_expectation(i, n)
        for n in (2, 4, 6)
        for i in range(2, n + 1, 2)
    )
    out.append(("cycle-count expectation 2/i, n<=6", ok, ""))
    return out


def sampler(seed: int = 0, samples: int = 32_000) -> list[Check]:
    out = []
    rng = make_rng(seed)
    adj = complete_adjacency(4)
    for name, draw in (
        ("pruefer", lambda: sample_ust_complete(4, rng)),
        ("random walk", lambda: aldous_broder_tree(adj, rng)),
        ("lazy random walk", lambda: aldous_broder_tree(adj, rng, lazy=True)),
    ):
        counts = Counter(tuple(draw().edges()) for _ in range(samples))
        p = chi_square_uniform([counts.get(k, 0) for k in _k4_trees()])
        out.append((f"{name} uniform on the 16 trees of K_4", len(counts) == 16 and p > 1e-3, f"p={p:.3g}"))
    return out


def _k4_trees() -> list[tuple]:
    from .sampling import enumerate_spanning_trees

    return [tuple(t.edges()) for t in enumerate_spanning_trees(4)]


def validators(seed: int = 0, graphs: int = 60) -> list[Check]:
    out = []
    rng = make_rng(seed)
    mismatches = 0
    for _ in range(graphs):
        n = int(rng.integers(3, 8))
        p = rng.random()
        g = SimpleGraph(n)
        for a, b in itertools.combinations(range(n), 2):
            if rng.random() < p:
                g.add_edge(a, b)
        if vertex_connectivity(g) != brute_force_vertex_connectivity(g):
            mismatches += 1
    out.append(("vertex connectivity vs separator enumeration", mismatches == 0, f"{mismatches} mismatches"))
    path = SimpleGraph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    ok = is_perfect_matching(path, [(0, 1), (2, 3)]) and not is_perfect_matching(path, [(1, 2)])
    out.append(("perfect matching validator", ok, ""))
    c5 = SimpleGraph.from_edges(5, [(i, (i + 1) % 5) for i in range(5)])
    ok = is_hamiltonian_cycle_witness(c5, [0, 1, 2, 3, 4]) and not is_hamiltonian_cycle_witness(c5, [0, 2, 1, 3, 4])
    out.append(("Hamilton witness validator", ok, ""))
    return out


SUITES: dict[str, Callable[..., list[Check]]] = {"formulas": formulas, "sampler": sampler, "validators": validators}
