"""Common machinery for Builder strategies.

A strategy is written as a generator: each ``yield`` hands back the edge
chosen from the tree it was last sent and receives the next round's tree.
Yielding ``None`` passes the round.  Sub-procedures such as the bipartite
matcher are generators too and are chained with ``yield from``.
"""

from __future__ import annotations

from typing import Any, Generator

import numpy as np

from ..graphs import Edge, SimpleGraph
from ..sampling import SpanningTree

# a strategy program receives trees and yields edges (or None to pass)
Program = Generator["Edge | None", SpanningTree, Any]


class Strategy:
    name = "strategy"

    def reset(self, n: int, rng: np.random.Generator) -> None:
        self.n = n
        self.rng = rng
        self.g: SimpleGraph | None = None
        self.maybe_done = False
        self.failure: str | None = None
        self.idle_rounds = 0
        self.phase = "start"
        self._witness: Any = None
        self.phase_rounds: dict[str, int] = {}
        self._program: Program | None = self.program()
        next(self._program)

    def program(self) -> Program:
        raise NotImplementedError
        yield

    def choose(self, g: SimpleGraph, tree: SpanningTree) -> Edge:
        """Return one edge of ``tree``; the engine adds it to ``g``."""
        self.g = g
        e = None
        if self._program is not None:
            try:
                e = self._program.send(tree)
            except StopIteration:
                self._program = None
        if e is None:
            self.idle_rounds += 1
            e = self.idle_edge(g, tree)
        return e

    def run_phase(self, phase: str, gen: Generator):
        """Forward the sub-program ``gen`` and count its rounds under ``phase``."""
        self.phase = phase
        try:
            e = gen.send(None)
            while True:
                self.phase_rounds[phase] = self.phase_rounds.get(phase, 0) + 1
                tree = yield e
                e = gen.send(tree)
        except StopIteration as stop:
            return stop.value

    def holds(self, g: SimpleGraph) -> bool:
        """The exact target property, used by the engine as stopping predicate."""
        raise NotImplementedError

    def witness(self) -> Any:
        return self._witness

    def finish(self, witness: Any = None) -> None:
        self._witness = witness
        self.maybe_done = True
        self.phase = "done"

    def fail(self, reason: str) -> None:
        self.failure = reason

    def pick(self, tree: SpanningTree, mask: np.ndarray) -> Edge | None:
        """A uniformly random tree edge among those selected by ``mask``."""
        idx = np.flatnonzero(mask)
        if idx.size == 0:
            return None
        return self.pick_index(tree, idx)

    def pick_index(self, tree: SpanningTree, idx: np.ndarray) -> Edge:
        i = idx[self.rng.integers(idx.size)] if idx.size > 1 else idx[0]
        return int(tree.u[i]), int(tree.v[i])

    def idle_edge(self, g: SimpleGraph, tree: SpanningTree) -> Edge:
        """A round that should change nothing: reuse an edge already in ``g`` if possible."""
        present = np.flatnonzero(g.has_edges(tree.u, tree.v))
        if present.size:
            i = present[0]
            return int(tree.u[i]), int(tree.v[i])
        return self.filler_edge(g, tree)

    def filler_edge(self, g: SimpleGraph, tree: SpanningTree) -> Edge:
        i = int(self.rng.integers(len(tree)))
        return int(tree.u[i]), int(tree.v[i])

    def prediction(self, n: int) -> float | None:
        """Predicted hitting time for this strategy, when one is known."""
        return None
