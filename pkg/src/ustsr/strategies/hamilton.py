"""Hamilton cycle: two perfect matchings, then merge their cycles into one."""

from __future__ import annotations

import numpy as np

from ..graphs import SimpleGraph, cycle_decomposition, is_hamiltonian_cycle_witness
from ..sampling import SpanningTree
from .base import Program, Strategy
from .matching import BipartiteMatcher


class HamiltonCycle(Strategy):
    """Match even to odd vertices twice and splice the cycles of the union.

    Splicing cycle ``C`` (with consecutive ``u, w``) into the big cycle ``P``:
    grow edges from ``u`` to vertices ``u'`` on ``P``; every cycle-neighbour
    ``w'`` of such a ``u'`` becomes a target, and a tree edge ``w w'`` lets
    ``u .. w (along C) w' .. u' (along P) u`` replace both cycles.
    """

    name = "hamilton"

    def __init__(self, omega: float | None = None):
        self.omega = omega

    def reset(self, n: int, rng: np.random.Generator) -> None:
        if n < 4 or n % 2:
            raise ValueError("Hamilton strategy needs an even n >= 4")
        self.evens = list(range(0, n, 2))
        self.odds = list(range(1, n, 2))
        self.merges = 0
        super().reset(n, rng)

    def program(self) -> Program:
        tree = yield
        first = BipartiteMatcher(self.n, self.evens, self.odds, omega=self.omega)
        tree = yield from self.run_phase("matching 1", first.run(self, tree))
        second = BipartiteMatcher(self.n, self.evens, self.odds, omega=self.omega)
        tree = yield from self.run_phase("matching 2", second.run(self, tree))
        self.m1, self.m2 = first.pairs(), second.pairs()
        cycles = cycle_decomposition(self.m1, self.m2)
        self.initial_cycles = [len(c) for c in cycles]
        cycles.sort(key=len, reverse=True)
        big = cycles[0]
        for other in cycles[1:]:
            tree, big = yield from self.run_phase("merging", self._merge(tree, big, other))
            self.merges += 1
        self.finish(list(big))

    def _merge(self, tree: SpanningTree, big: list[int], small: list[int]):
        g = self.g
        n = self.n
        L = len(big)
        pos = np.full(n, -1, dtype=np.int64)
        pos[np.asarray(big)] = np.arange(L)
        on_big = pos >= 0
        u, w = small[0], small[1]
        target = np.zeros(n, dtype=np.bool_)
        partner = np.full(n, -1, dtype=np.int64)

        def add_anchor(up: int) -> None:
            p = pos[up]
            for q in ((p - 1) % L, (p + 1) % L):
                target[big[q]] = True
                partner[big[q]] = up

        for up in g.adj[u]:
            if on_big[up]:
                add_anchor(up)
        while True:
            g = self.g
            hit = next((x for x in g.adj[w] if target[x]), None)
            if hit is not None:
                return tree, self._splice(big, pos, small, hit, int(partner[hit]))
            tu, tv = tree.u, tree.v
            e = self.pick(tree, ((tu == w) & target[tv]) | ((tv == w) & target[tu]))
            if e is None:
                mask = ((tu == u) & on_big[tv]) | ((tv == u) & on_big[tu])
                idx = np.flatnonzero(mask)
                if idx.size:
                    idx = idx[~g.has_edges(tu[idx], tv[idx])]
                if idx.size:
                    e = self.pick_index(tree, idx)
                    add_anchor(e[1] if e[0] == u else e[0])
            tree = yield e

    @staticmethod
    def _splice(big: list[int], pos: np.ndarray, small: list[int], hit: int, up: int) -> list[int]:
        L = len(big)
        p = int(pos[hit])
        if big[(p + 1) % L] == up:
            tail = [big[(p - t) % L] for t in range(L)]
        else:
            tail = [big[(p + t) % L] for t in range(L)]
        head = [small[0]] + small[:0:-1]
        return head + tail

    def holds(self, g: SimpleGraph) -> bool:
        w = self.witness()
        return w is not None and is_hamiltonian_cycle_witness(g, w)

    def prediction(self, n: int) -> float:
        return float(n)
