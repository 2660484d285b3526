"""Exhaustive reference computations for small instances."""

from __future__ import annotations

import itertools
from collections import Counter
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from .graphs import Edge, SimpleGraph, canon, cycle_decomposition
from .sampling import enumerate_spanning_trees


@lru_cache(maxsize=None)
def _tree_masks(n: int) -> tuple[int, ...]:
    bit = {e: 1 << i for i, e in enumerate(itertools.combinations(range(n), 2))}
    return tuple(sum(bit[e] for e in t.edges()) for t in enumerate_spanning_trees(n))


def _mask(n: int, edges: Iterable[Edge]) -> int:
    bit = {e: 1 << i for i, e in enumerate(itertools.combinations(range(n), 2))}
    return sum(bit[e] for e in {canon(a, b) for a, b in edges})


def brute_force_avoid_prob(n: int, forbidden: Iterable[Edge]) -> Fraction:
    """Fraction of all labelled trees on ``n`` vertices using none of ``forbidden``."""
    if n > 7:
        raise ValueError("enumeration oracle is limited to n <= 7")
    f = _mask(n, forbidden)
    masks = _tree_masks(n)
    return Fraction(sum(1 for m in masks if m & f == 0), len(masks))


def clique_edges(k: int) -> list[Edge]:
    return list(itertools.combinations(range(k), 2))


def biclique_edges(n: int, k: int, l: int) -> list[Edge]:
    """All pairs between the first ``k`` and the last ``l`` vertices."""
    return [(a, b) for a in range(k) for b in range(n - l, n)]


def brute_force_vertex_connectivity(g: SimpleGraph) -> int:
    """Smallest vertex set whose removal disconnects ``g``; ``n - 1`` for complete graphs."""
    n = g.n
    for size in range(n - 1):
        for cut in itertools.combinations(range(n), size):
            rest = [v for v in range(n) if v not in cut]
            gone = set(cut)
            seen = {rest[0]}
            stack = [rest[0]]
            while stack:
                x = stack.pop()
                for y in g.adj[x]:
                    if y not in gone and y not in seen:
                        seen.add(y)
                        stack.append(y)
            if len(seen) < len(rest):
                return size
    return n - 1


def exact_cycle_expectations(n: int) -> dict[int, Fraction]:
    """Average cycle-length counts over all pairs of even-odd perfect matchings."""
    evens = list(range(0, n, 2))
    odds = list(range(1, n, 2))
    matchings = [list(zip(evens, p)) for p in itertools.permutations(odds)]
    totals: Counter[int] = Counter()
    pairs = 0
    for m1 in matchings:
        for m2 in matchings:
            pairs += 1
            for c in cycle_decomposition(m1, m2):
                totals[len(c)] += 1
    return {i: Fraction(totals[i], pairs) for i in range(2, n + 1, 2)}
