"""k-connectivity from k random bipartite matchings plus a degree repair."""

from __future__ import annotations

import math

import numpy as np

from ..graphs import SimpleGraph, vertex_connectivity_at_least
from ..sampling import SpanningTree
from .base import Program, Strategy
from .matching import BipartiteMatcher


class KConnected(Strategy):
    """Build ``H`` as the union of ``k`` matchings across fresh random halvings.

    Vertices left with ``H``-degree below ``k`` (repeated pairs, odd ``n``)
    are repaired by joining them to vertices of ``H``-degree exactly ``k``,
    or to each other, so ``H`` ends with all degrees in ``{k, k+1}``.
    """

    name = "kconn"

    def __init__(self, k: int = 2, omega: float | None = None, repair_budget: int | None = None):
        if k < 1:
            raise ValueError("k >= 1")
        self.k = k
        self.omega = omega
        self.repair_budget = repair_budget

    def reset(self, n: int, rng: np.random.Generator) -> None:
        if n < 2 * self.k + 2:
            raise ValueError("need n >= 2k + 2")
        self.H = SimpleGraph(n)
        super().reset(n, rng)

    def program(self) -> Program:
        tree = yield
        n, k = self.n, self.k
        for p in range(k):
            perm = self.rng.permutation(n)
            matcher = BipartiteMatcher(n, perm[: n // 2], perm[n // 2 :], omega=self.omega)
            tree = yield from self.run_phase(f"matching {p + 1}", matcher.run(self, tree))
            for a, b in matcher.pairs():
                self.H.add_edge(a, b)
        self.repeats = int((self.H.degrees < k).sum())
        tree = yield from self.run_phase("repair", self._repair(tree))
        if self.failure is None:
            self.finish(list(self.H.edges()))

    def _free_repairs(self) -> None:
        # edges already in G but not yet in H cost nothing
        H, g, k = self.H, self.g, self.k
        for v in np.flatnonzero(H.degrees < k):
            for x in sorted(g.adj[v]):
                if H.degrees[v] >= k:
                    break
                if H.degrees[x] <= k and not H.has_edge(v, x):
                    H.add_edge(v, x)

    def _repair(self, tree: SpanningTree):
        H, k = self.H, self.k
        budget = self.repair_budget
        if budget is None:
            budget = max(50, math.ceil(math.log(self.n) * k * k))
        spent = 0
        while True:
            self._free_repairs()
            d = H.degrees
            low = d < k
            if not low.any():
                return tree
            if spent >= budget:
                self.fail("repair budget exhausted")
                return tree
            u, v = tree.u, tree.v
            e = None
            for mask in (
                (low[u] & (d[v] == k)) | (low[v] & (d[u] == k)),
                low[u] & low[v],
            ):
                idx = np.flatnonzero(mask)
                if idx.size:
                    idx = idx[~H.has_edges(u[idx], v[idx])]
                if idx.size:
                    e = self.pick_index(tree, idx)
                    break
            if e is not None:
                H.add_edge(*e)
            spent += 1
            tree = yield e

    def holds(self, g: SimpleGraph) -> bool:
        return vertex_connectivity_at_least(g, self.k)

    def prediction(self, n: int) -> float:
        return self.k * n / 2
