"""Raise the minimum degree to ``k`` one level at a time."""

from __future__ import annotations

import math

import numpy as np

from .._kernels import min_degree_pick
from ..graphs import Edge, SimpleGraph
from ..sampling import SpanningTree
from .base import Program, Strategy


def min_degree_prediction(n: int, k: int) -> float:
    """``kn/2 + sqrt(2 pi n)/4`` rounds."""
    return k * n / 2 + math.sqrt(2 * math.pi * n) / 4


class MinDegree(Strategy):
    """At level ``i`` join two vertices of degree ``i-1`` when the tree allows it.

    Otherwise join a degree ``i-1`` vertex to one of degree ``i``, otherwise
    two vertices of degree ``i``.  The level goes up, without using a round,
    once no vertex of degree ``i-1`` is left.
    """

    name = "min_degree"

    def __init__(self, k: int = 1, exit_on_stall: bool = False, max_stall_run: int = 100):
        if k < 1:
            raise ValueError("k >= 1")
        self.k = k
        self.exit_on_stall = exit_on_stall
        self.max_stall_run = max_stall_run

    def reset(self, n: int, rng: np.random.Generator) -> None:
        if n <= self.k + 1:
            raise ValueError("min-degree target needs n > k + 1")
        self.level = 1
        self.stalls = 0
        self.choices = np.zeros(3, dtype=np.int64)
        self._buf = None
        super().reset(n, rng)

    def _scan(self, g: SimpleGraph, tree: SpanningTree, lo: int) -> tuple[int, int]:
        eu, ev = tree.u, tree.v
        x = self.rng.random()
        if g._matrix is not None:
            if self._buf is None or self._buf.shape[1] < eu.size:
                self._buf = np.empty((3, eu.size), dtype=np.int64)
            return min_degree_pick(eu, ev, g.degrees, g._matrix, lo, x, self._buf)
        du, dv = g.degrees[eu], g.degrees[ev]
        classes = [
            (du == lo) & (dv == lo),
            ((du == lo) & (dv == lo + 1)) | ((du == lo + 1) & (dv == lo)),
            (du == lo + 1) & (dv == lo + 1),
        ]
        for c, mask in enumerate(classes):
            idx = np.flatnonzero(mask)
            if idx.size:
                idx = idx[~g.has_edges(eu[idx], ev[idx])]
            if idx.size:
                return int(idx[min(int(x * idx.size), idx.size - 1)]), c
        return -1, -1

    def program(self) -> Program:
        tree = yield
        run = 0
        while True:
            g = self.g
            while self.level <= self.k and g.degree_counts[self.level - 1] == 0:
                self.level += 1
            self.phase = f"level {self.level}"
            if self.level > self.k:
                self.finish()
                return
            i, c = self._scan(g, tree, self.level - 1)
            if i < 0:
                self.stalls += 1
                run += 1
                if self.exit_on_stall or run >= self.max_stall_run:
                    self.fail(f"stalled at level {self.level}")
                tree = yield None
                continue
            run = 0
            self.choices[c] += 1
            tree = yield int(tree.u[i]), int(tree.v[i])

    def filler_edge(self, g: SimpleGraph, tree: SpanningTree) -> Edge:
        du, dv = g.degrees[tree.u], g.degrees[tree.v]
        low = np.minimum(du, dv)
        e = self.pick(tree, low == low.min())
        assert e is not None
        return e

    def holds(self, g: SimpleGraph) -> bool:
        return g.min_degree >= self.k

    def prediction(self, n: int) -> float:
        return min_degree_prediction(n, self.k)
