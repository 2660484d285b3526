"""H-factors: trees, graphs with a central vertex, and chains of growing cliques."""

from __future__ import annotations

import itertools
import math
from typing import Sequence

import numpy as np

from ..graphs import Edge, PatternGraph, SimpleGraph, is_central, verify_h_factor
from ..sampling import SpanningTree
from .base import Program, Strategy
from .matching import BipartiteMatcher


class _FactorBase(Strategy):
    pattern: PatternGraph

    def holds(self, g: SimpleGraph) -> bool:
        w = self.witness()
        return w is not None and verify_h_factor(g, self.pattern, w)

    def prediction(self, n: int) -> float:
        return n * self.pattern.size / self.pattern.order


class TreeFactor(_FactorBase):
    """Grow ``floor(n/|T|)`` copies of a tree ``T`` one tree edge at a time.

    The roots are the first ``c`` vertices.  For each edge ``(p, q)`` of a
    depth-first order, the images of ``p`` are matched into the vertices not
    used yet, and the partners become the images of ``q``.
    """

    name = "tree_factor"

    def __init__(self, pattern: PatternGraph, omega: float | None = None):
        if not pattern.is_tree():
            raise ValueError("tree factor needs a tree pattern")
        self.pattern = pattern
        self.omega = omega

    def program(self) -> Program:
        tree = yield
        n, h = self.n, self.pattern.order
        c = n // h
        root = self.pattern.root or 0
        assign = np.full((c, h), -1, dtype=np.int64)
        assign[:, root] = np.arange(c)
        used = np.zeros(n, dtype=np.bool_)
        used[:c] = True
        for step, (p, q) in enumerate(self.pattern.dfs_edges(root)):
            A = assign[:, p]
            matcher = BipartiteMatcher(n, A, np.flatnonzero(~used), omega=self.omega)
            tree = yield from self.run_phase(f"edge {step + 1}", matcher.run(self, tree))
            partners = matcher.mate[A]
            assign[:, q] = partners
            used[partners] = True
        self.finish([tuple(int(x) for x in row) for row in assign])


class AlmostFactor:
    """Copies of ``F`` on consecutive blocks of ``vertices``, all but an ``eps`` fraction.

    Every edge of ``F`` gets one stage, which builds that edge inside blocks
    until a ``1 - eps/|E(F)|`` fraction of the blocks has it.
    """

    def __init__(self, n: int, pattern: PatternGraph, vertices: Sequence[int], eps: float, budget: int | None = None):
        self.n = n
        self.pattern = pattern
        s = pattern.order
        verts = np.asarray(vertices, dtype=np.int64)
        self.blocks = len(verts) // s
        self.members = verts[: self.blocks * s].reshape(self.blocks, s)
        self.block_of = np.full(n, -1, dtype=np.int64)
        self.role = np.full(n, -1, dtype=np.int64)
        self.block_of[self.members.ravel()] = np.repeat(np.arange(self.blocks), s)
        self.role[self.members.ravel()] = np.tile(np.arange(s), self.blocks)
        E = max(pattern.size, 1)
        self.delta = eps / E
        p = 1 - math.exp(-self.delta / s) if self.delta > 0 else 1.0
        self.budget = math.ceil(2 * n / p) if budget is None else budget
        self.built = np.ones((0, self.blocks), dtype=np.bool_)

    def run(self, owner: Strategy, tree: SpanningTree):
        rows = []
        target = math.ceil((1 - self.delta) * self.blocks)
        for a, b in self.pattern.edges:
            built = owner.g.has_edges(self.members[:, a], self.members[:, b]).copy()
            spent = 0
            while built.sum() < target and spent < self.budget:
                u, v = tree.u, tree.v
                bu = self.block_of[u]
                ru, rv = self.role[u], self.role[v]
                mask = (bu >= 0) & (bu == self.block_of[v]) & ~built[bu]
                mask &= ((ru == a) & (rv == b)) | ((ru == b) & (rv == a))
                e = owner.pick(tree, mask)
                if e is not None:
                    built[self.block_of[e[0]]] = True
                spent += 1
                tree = yield e
            rows.append(built)
        if rows:
            self.built = np.vstack(rows)
        return tree

    def complete_blocks(self) -> np.ndarray:
        if self.built.shape[0] == 0:
            return np.arange(self.blocks)
        return np.flatnonzero(self.built.all(axis=0))


class CentralFactor(_FactorBase):
    """``H``-factor when ``H`` has a vertex ``u`` all of whose edges are bridges.

    First an almost-factor of ``H - u`` on all vertices, then for every
    neighbour ``u_i`` of ``u`` a matching from the unused vertices (the
    future images of ``u``) to the images of ``u_i``.  The component of
    ``H - u`` containing ``u_i`` is taken from whichever block the matching
    pairs each centre with.
    """

    name = "central_factor"

    def __init__(self, pattern: PatternGraph, witness: int | None = None, omega: float | None = None):
        u = witness if witness is not None else pattern.witness
        if u is None:
            u = is_central(pattern)
        if u is None:
            raise ValueError("pattern has no central vertex")
        if pattern.order < 2:
            raise ValueError("pattern needs an edge")
        self.pattern = pattern
        self.u = u
        self.omega = omega
        rest = [x for x in range(pattern.order) if x != u]
        self.local = {x: i for i, x in enumerate(rest)}
        self.rest_pattern = PatternGraph(
            len(rest), tuple((self.local[a], self.local[b]) for a, b in pattern.edges if u not in (a, b))
        )
        nbrs = sorted(pattern.adjacency()[u])
        comps = pattern.components(removed=[u])
        self.component_of: dict[int, int] = {}
        for x in rest:
            owner = [i for i, nb in enumerate(nbrs) if x in next(c for c in comps if nb in c)]
            if len(owner) != 1:
                raise ValueError("pattern has a component without a neighbour of the centre")
            self.component_of[x] = owner[0]
        self.neighbours = nbrs

    def program(self) -> Program:
        tree = yield
        n, h = self.n, self.pattern.order
        c = n // h
        almost = AlmostFactor(n, self.rest_pattern, np.arange(n), eps=1 / h)
        tree = yield from self.run_phase("almost factor", almost.run(self, tree))
        complete = almost.complete_blocks()
        if len(complete) < c:
            self.fail("almost-factor left too few complete copies")
            return
        chosen = complete[:c]
        taken = np.zeros(n, dtype=np.bool_)
        taken[almost.members[chosen].ravel()] = True
        centres = np.flatnonzero(~taken)[:c]
        block_for = np.zeros((len(self.neighbours), n), dtype=np.int64)
        for i, nb in enumerate(self.neighbours):
            B = almost.members[chosen, self.local[nb]]
            matcher = BipartiteMatcher(n, centres, B, omega=self.omega)
            tree = yield from self.run_phase(f"matching {i + 1}", matcher.run(self, tree))
            block_for[i, centres] = almost.block_of[matcher.mate[centres]]
        placement = []
        for x in centres:
            row = []
            for hv in range(h):
                if hv == self.u:
                    row.append(int(x))
                else:
                    blk = block_for[self.component_of[hv], x]
                    row.append(int(almost.members[blk, self.local[hv]]))
            placement.append(tuple(row))
        self.finish(placement)


def ladder(r: int) -> list[Edge]:
    """The path ``0-1-..-(r-1)`` followed by the remaining pairs in lexicographic order."""
    path = [(i, i + 1) for i in range(r - 1)]
    rest = [e for e in itertools.combinations(range(r), 2) if e not in set(path)]
    return path + rest


class ChainFactor(_FactorBase):
    """Factor of a chain of partially built ``r``-cliques, ending with copies of ``K_r``.

    Level ``i`` sets carry the first ``i`` edges of :func:`ladder`.  Stage 1
    fills quota ``Q_i = ceil(n/(l_i r))`` at every level by upgrading sets one
    edge at a time; stage 2 splits ``Q_R`` equal classes across levels and
    strings them together with bipartite matchings.  The resulting chain
    pattern is available as ``pattern`` once the strategy finishes.
    """

    name = "chain_factor"

    def __init__(self, r: int = 3, lengths: Sequence[int] | None = None, c: int = 4, omega: float | None = None):
        if r < 2:
            raise ValueError("r >= 2")
        self.r = r
        self.steps = ladder(r)
        R = len(self.steps)
        self.lengths = list(lengths) if lengths is not None else [c * 10**i for i in range(R)]
        if len(self.lengths) != R or any(b <= a for a, b in zip(self.lengths, self.lengths[1:])):
            raise ValueError(f"need {R} strictly increasing lengths")
        self.omega = omega
        self.pattern = PatternGraph.complete(r)

    def reset(self, n: int, rng: np.random.Generator) -> None:
        R = len(self.steps)
        self.quota = [0] + [math.ceil(n / (l * self.r)) for l in self.lengths]
        if self.r * sum(self.quota) > n:
            raise ValueError("quotas need more vertices than available")
        self.set_of = np.full(n, -1, dtype=np.int64)
        self.local = np.full(n, -1, dtype=np.int64)
        self.sets: list[list[int]] = []
        self.level: list[int] = []
        self.count = [0] * (R + 1)
        super().reset(n, rng)

    def _internal(self, g: SimpleGraph, tree: SpanningTree) -> np.ndarray:
        su = self.set_of[tree.u]
        return (su >= 0) & (su == self.set_of[tree.v])

    def filler_edge(self, g: SimpleGraph, tree: SpanningTree) -> Edge:
        # never touch the inside of a set, so each set induces exactly its level
        e = self.pick(tree, ~self._internal(g, tree))
        return e if e is not None else super().filler_edge(g, tree)

    def _upgrades(self, tree: SpanningTree) -> dict[int, tuple[int, Edge]]:
        """For each level, the smallest set whose next ladder edge is in the tree."""
        R = len(self.steps)
        best: dict[int, tuple[int, Edge]] = {}
        for i in np.flatnonzero(self._internal(self.g, tree)):
            a, b = int(tree.u[i]), int(tree.v[i])
            sid = int(self.set_of[a])
            lvl = self.level[sid]
            if lvl >= R:
                continue
            la, lb = sorted((int(self.local[a]), int(self.local[b])))
            if (la, lb) == self.steps[lvl] and (lvl not in best or sid < best[lvl][0]):
                best[lvl] = (sid, (a, b))
        return best

    def _open(self, tree: SpanningTree) -> Edge | None:
        g = self.g
        fresh = self.set_of < 0
        if fresh.sum() < self.r:
            return None
        u, v = tree.u, tree.v
        mask = fresh[u] & fresh[v]
        idx = np.flatnonzero(mask)
        if idx.size:
            idx = idx[~g.has_edges(u[idx], v[idx])]
        if idx.size == 0:
            return None
        a, b = self.pick_index(tree, idx)
        members = [a, b]
        for x in np.flatnonzero(fresh):
            if len(members) == self.r:
                break
            x = int(x)
            if x not in (a, b) and not any(g.has_edge(x, y) for y in members):
                members.append(x)
        if len(members) < self.r:
            return None
        sid = len(self.sets)
        self.sets.append(members)
        self.level.append(1)
        self.count[1] += 1
        for i, x in enumerate(members):
            self.set_of[x] = sid
            self.local[x] = i
        return a, b

    def _stage1(self, tree: SpanningTree):
        R = len(self.steps)
        Q = self.quota
        while True:
            short = [i for i in range(1, R + 1) if self.count[i] < Q[i]]
            if not short:
                return tree
            top = max(short)
            e = None
            best = self._upgrades(tree)
            for lvl in range(top - 1, 0, -1):
                if self.count[lvl + 1] >= Q[lvl + 1] or lvl not in best:
                    continue
                sid, e = best[lvl]
                self.level[sid] += 1
                self.count[lvl] -= 1
                self.count[lvl + 1] += 1
                break
            if e is None and self.count[1] < Q[1]:
                if (self.set_of < 0).sum() < self.r:
                    return tree
                e = self._open(tree)
            tree = yield e

    def program(self) -> Program:
        tree = yield
        n, r = self.n, self.r
        R = len(self.steps)
        tree = yield from self.run_phase("levels", self._stage1(tree))
        c = self.count[R]
        if c == 0:
            self.fail("no complete clique was built")
            return
        classes = []  # (level, units) with units a (c, r) or (c, 1) array of vertices
        used = np.zeros(n, dtype=np.bool_)
        for lvl in range(R, 0, -1):
            sets = [s for s, l in zip(self.sets, self.level) if l == lvl]
            k = len(sets) // c
            for j in range(k):
                block = np.asarray(sets[j * c : (j + 1) * c], dtype=np.int64)
                used[block.ravel()] = True
                classes.append((lvl, block))
        loose = np.flatnonzero(~used)
        for j in range(len(loose) // c):
            classes.append((0, loose[j * c : (j + 1) * c].reshape(c, 1)))
        # position of each unit inside the chain of every copy
        order = np.zeros((len(classes), c), dtype=np.int64)
        order[0] = np.arange(c)
        for j in range(len(classes) - 1):
            exits = classes[j][1][:, -1]
            entries = classes[j + 1][1][:, 0]
            matcher = BipartiteMatcher(n, exits, entries, omega=self.omega)
            tree = yield from self.run_phase("chaining", matcher.run(self, tree))
            unit_of_entry = {int(x): q for q, x in enumerate(entries)}
            partner = matcher.mate[exits[order[j]]]
            order[j + 1] = [unit_of_entry[int(x)] for x in partner]
        self.pattern = self._chain_pattern(classes)
        placement = []
        for q in range(c):
            row: list[int] = []
            for j, (_, units) in enumerate(classes):
                row.extend(int(x) for x in units[order[j, q]])
            placement.append(tuple(row))
        self.finish(placement)

    def _chain_pattern(self, classes) -> PatternGraph:
        edges: list[Edge] = []
        offset = 0
        prev_exit = None
        for lvl, units in classes:
            width = units.shape[1]
            edges.extend((offset + a, offset + b) for a, b in self.steps[:lvl])
            if prev_exit is not None:
                edges.append((prev_exit, offset))
            prev_exit = offset + width - 1
            offset += width
        return PatternGraph(offset, tuple(edges), name=f"k{self.r}_chain")

    def prediction(self, n: int) -> float | None:
        return None
