"""Greedy spanning tree: always join two components of the current graph."""

from __future__ import annotations

import numpy as np
from scipy.cluster.hierarchy import DisjointSet

from ..graphs import SimpleGraph
from .base import Program, Strategy


class SpanningTreeGreedy(Strategy):
    """Take a tree edge between two components; every offered tree has one.

    The offered tree spans ``K_n``, so it crosses every cut and the graph
    becomes a spanning tree after exactly ``n - 1`` rounds.
    """

    name = "spanning_tree"

    def program(self) -> Program:
        tree = yield
        comps = DisjointSet(range(self.n))
        for _ in range(self.n - 1):
            root = np.fromiter((comps[x] for x in range(self.n)), dtype=np.int64, count=self.n)
            e = self.pick(tree, root[tree.u] != root[tree.v])
            comps.merge(*e)
            tree = yield e
        self.finish()

    def holds(self, g: SimpleGraph) -> bool:
        return g.m == g.n - 1 and g.n - 1 == _spanning_forest_size(g)


def _spanning_forest_size(g: SimpleGraph) -> int:
    comps = DisjointSet(range(g.n))
    for a, b in g.edges():
        comps.merge(a, b)
    return g.n - comps.n_subsets
