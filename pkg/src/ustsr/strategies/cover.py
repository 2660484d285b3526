"""H-cover: every vertex lies in some copy of H."""

from __future__ import annotations

import math

import numpy as np

from ..graphs import Edge, PatternGraph, SimpleGraph, verify_h_cover
from ..sampling import SpanningTree
from .base import Program, Strategy


def cover_order(pattern: PatternGraph) -> list[int]:
    """Root (a minimum-degree vertex), its neighbours, then the rest depth-first."""
    degs = [pattern.degree(v) for v in range(pattern.order)]
    root = pattern.root if pattern.root is not None else degs.index(min(degs))
    adj = pattern.adjacency()
    order = [root] + sorted(adj[root])
    seen = set(order)

    def visit(x: int) -> None:
        for y in sorted(adj[x]):
            if y not in seen:
                seen.add(y)
                order.append(y)
                visit(y)

    for x in list(order):
        visit(x)
    if len(order) != pattern.order:
        raise ValueError("cover needs a connected pattern")
    return order


class HCover(Strategy):
    """Build several scaffolds, then hang every other vertex on one of them.

    Relabel ``H`` as ``u_0..u_k`` (root first, its ``r`` neighbours next).  A
    scaffold is a family of sets ``U_1..U_k`` in which every vertex of ``U_i``
    is adjacent to all of ``U_j`` whenever ``u_i u_j`` is an edge of ``H``, so
    any transversal spans a copy of ``H - u_0``.  Sets are filled from the top
    index down: an empty set becomes a fan of fresh neighbours of the current
    vertex, a non-empty one is cut down to that vertex's neighbourhood.
    Afterwards every vertex outside the scaffolds receives one neighbour in
    each of ``U_1..U_r`` of a single scaffold and plays ``u_0``.
    """

    name = "cover"

    def __init__(
        self,
        pattern: PatternGraph,
        scaffolds: int | None = None,
        fan: int | None = None,
        cap: float | None = None,
        seed_size: int = 1,
        keep_fraction: float | None = None,
    ):
        if pattern.order < 2 or not pattern.is_connected():
            raise ValueError("cover needs a connected pattern with an edge")
        self.pattern = pattern
        self.label = cover_order(pattern)
        pos = {x: i for i, x in enumerate(self.label)}
        self.k = pattern.order - 1
        self.r = pattern.degree(self.label[0])
        self.edges_idx = {tuple(sorted((pos[a], pos[b]))) for a, b in pattern.edges}
        self.scaffolds = scaffolds
        self.fan = fan
        self.cap = cap
        self.seed_size = seed_size
        self.keep_fraction = keep_fraction

    def reset(self, n: int, rng: np.random.Generator) -> None:
        half_root = math.ceil(math.sqrt(n) / 2)
        self.q = self.scaffolds or half_root
        self.f = self.fan or half_root
        self.cap_size = int(self.cap if self.cap is not None else math.log(n) ** 3)
        self.keep = self.keep_fraction if self.keep_fraction is not None else 1 / self.cap_size**2
        if self.q * (self.k * self.f + self.seed_size) >= n:
            raise ValueError("scaffolds would use up the whole vertex set")
        self.fresh = np.ones(n, dtype=np.bool_)
        self.sets: list[dict[int, list[int]]] = []
        super().reset(n, rng)

    def _lower(self, i: int) -> list[int]:
        return [j for j in range(i - 1, 0, -1) if (j, i) in self.edges_idx]

    def _take_fresh(self, count: int) -> list[int]:
        pool = np.flatnonzero(self.fresh & (self.g.degrees == 0))
        if pool.size < count:
            pool = np.flatnonzero(self.fresh)
        chosen = [int(x) for x in pool[:count]]
        self.fresh[chosen] = False
        return chosen

    def _edge_from(self, tree: SpanningTree, v: int, allowed: np.ndarray) -> Edge | None:
        tu, tv = tree.u, tree.v
        mask = ((tu == v) & allowed[tv]) | ((tv == v) & allowed[tu])
        idx = np.flatnonzero(mask)
        if idx.size:
            idx = idx[~self.g.has_edges(tu[idx], tv[idx])]
        if idx.size == 0:
            return None
        return self.pick_index(tree, idx)

    def _scaffold(self, tree: SpanningTree):
        n, k = self.n, self.k
        U: dict[int, list[int]] = {t: [] for t in range(1, k + 1)}
        for i in range(k, 0, -1):
            if not U[i]:
                U[i] = self._take_fresh(self.seed_size)
            U[i] = U[i][: self.cap_size]
            for j in self._lower(i):
                for v in list(U[i]):
                    g = self.g
                    if not U[j]:
                        got = [x for x in sorted(g.adj[v]) if self.fresh[x]][: self.f]
                        self.fresh[got] = False
                        spent = 0
                        while len(got) < self.f and spent < 4 * self.f + 10:
                            e = self._edge_from(tree, v, self.fresh)
                            if e is not None:
                                x = e[1] if e[0] == v else e[0]
                                self.fresh[x] = False
                                got.append(x)
                            spent += 1
                            tree = yield e
                        if not got:
                            self.fail("could not grow a fan")
                            return tree, U
                        U[j] = got[: self.cap_size]
                        continue
                    need = max(1, math.ceil(self.keep * len(U[j])))
                    inside = np.zeros(n, dtype=np.bool_)
                    inside[U[j]] = True
                    have = [y for y in U[j] if g.has_edge(v, y)]
                    spent = 0
                    budget = 4 * need * math.ceil(n / (2 * len(U[j])))
                    while len(have) < need and spent < budget:
                        e = self._edge_from(tree, v, inside)
                        if e is not None:
                            y = e[1] if e[0] == v else e[0]
                            have.append(y)
                            inside[y] = False
                        spent += 1
                        tree = yield e
                    if have:
                        U[j] = [y for y in U[j] if y in set(have)]
                    elif len(U[i]) > 1:
                        U[i].remove(v)
                    else:
                        self.fail("scaffold set emptied")
                        return tree, U
        return tree, U

    def program(self) -> Program:
        tree = yield
        n, k, r = self.n, self.k, self.r
        for _ in range(self.q):
            tree, U = yield from self.run_phase("scaffold", self._scaffold(tree))
            if self.failure:
                return
            self.sets.append(U)
        # which scaffold set each vertex finally belongs to
        self.scaf_of = np.full(n, -1, dtype=np.int64)
        self.slot_of = np.full(n, -1, dtype=np.int64)
        for b, U in enumerate(self.sets):
            for t, members in U.items():
                self.scaf_of[members] = b
                self.slot_of[members] = t
        hang = self.scaf_of < 0
        self.block = np.full(n, -1, dtype=np.int64)
        self.nbr = np.full((n, r + 1), -1, dtype=np.int64)
        self.used_as = np.zeros(n, dtype=np.bool_)
        sizes = {t: np.mean([len(U[t]) for U in self.sets]) for t in range(1, r + 1)}
        phases = sorted(range(1, r + 1), key=lambda t: (sizes[t], t))
        for step, t in enumerate(phases):
            tree = yield from self.run_phase(f"attach {t}", self._attach(tree, t, hang, first=step == 0))
        tree = yield from self.run_phase("cleanup", self._cleanup(tree))
        if self.failure is None:
            self.finish(self._placement())

    def _attach(self, tree: SpanningTree, t: int, hang: np.ndarray, first: bool):
        g = self.g
        target = self.slot_of == t
        need = hang & (self.nbr[:, t] < 0)
        for v in np.flatnonzero(need):
            for y in sorted(g.adj[v]):
                if target[y] and (first or self.scaf_of[y] == self.block[v]):
                    self._attach_one(int(v), y, t, first)
                    need[v] = False
                    break
        while need.any():
            tu, tv = tree.u, tree.v
            if first:
                mask = (need[tu] & target[tv]) | (need[tv] & target[tu])
            else:
                mask = (need[tu] & target[tv] & (self.block[tu] == self.scaf_of[tv])) | (
                    need[tv] & target[tu] & (self.block[tv] == self.scaf_of[tu])
                )
            idx = np.flatnonzero(mask)
            if idx.size:
                idx = idx[~g.has_edges(tu[idx], tv[idx])]
            e = None
            if idx.size:
                # prefer targets nobody has used yet, so scaffold vertices get covered too
                ends = np.where(need[tu[idx]], tv[idx], tu[idx])
                unused = idx[~self.used_as[ends]]
                e = self.pick_index(tree, unused if unused.size else idx)
                v, y = (e[0], e[1]) if need[e[0]] else (e[1], e[0])
                self._attach_one(v, y, t, first)
                need[v] = False
            tree = yield e
        return tree

    def _attach_one(self, v: int, y: int, t: int, first: bool) -> None:
        if first:
            self.block[v] = self.scaf_of[y]
        self.nbr[v, t] = y
        self.used_as[y] = True

    def _complete(self) -> np.ndarray:
        return (self.block >= 0) & (self.nbr[:, 1 : self.r + 1] >= 0).all(axis=1)

    def _cleanup(self, tree: SpanningTree):
        g = self.g
        self.cover_of: dict[int, int] = {}
        complete = self._complete()
        for b in range(len(self.sets)):
            if not (complete & (self.block == b)).any():
                self.fail("a scaffold has no attached vertex")
                return tree
        lonely = (self.slot_of >= 1) & (self.slot_of <= self.r) & ~self.used_as
        for x in np.flatnonzero(lonely):
            w = next((w for w in sorted(g.adj[x]) if complete[w] and self.block[w] == self.scaf_of[x]), None)
            if w is not None:
                self.cover_of[int(x)] = int(w)
                lonely[x] = False
        while lonely.any():
            tu, tv = tree.u, tree.v
            bu, bv = self.block[tu], self.block[tv]
            mask = (lonely[tu] & complete[tv] & (bv == self.scaf_of[tu])) | (
                lonely[tv] & complete[tu] & (bu == self.scaf_of[tv])
            )
            idx = np.flatnonzero(mask)
            if idx.size:
                idx = idx[~g.has_edges(tu[idx], tv[idx])]
            e = None
            if idx.size:
                e = self.pick_index(tree, idx)
                x, w = (e[0], e[1]) if lonely[e[0]] else (e[1], e[0])
                self.cover_of[x] = w
                lonely[x] = False
            tree = yield e
        return tree

    def _copy_for(self, w: int, swap: tuple[int, int] | None = None) -> tuple[int, ...]:
        U = self.sets[self.block[w]]
        pick = {0: w}
        for t in range(1, self.k + 1):
            pick[t] = int(self.nbr[w, t]) if t <= self.r else U[t][0]
        if swap is not None:
            pick[swap[0]] = swap[1]
        out = [0] * (self.k + 1)
        for t, x in pick.items():
            out[self.label[t]] = x
        return tuple(out)

    def _placement(self) -> list[tuple[int, ...]]:
        complete = self._complete()
        anchor = {}
        for w in np.flatnonzero(complete):
            anchor.setdefault(int(self.block[w]), int(w))
        owner: dict[int, int] = {}
        for w in np.flatnonzero(complete):
            for t in range(1, self.r + 1):
                owner.setdefault(int(self.nbr[w, t]), int(w))
        out = []
        for v in range(self.n):
            t = int(self.slot_of[v])
            if t < 0:
                out.append(self._copy_for(v))
            elif t <= self.r:
                w = owner.get(v, self.cover_of.get(v))
                out.append(self._copy_for(w, (t, v)))
            else:
                out.append(self._copy_for(anchor[int(self.scaf_of[v])], (t, v)))
        return out

    def holds(self, g: SimpleGraph) -> bool:
        w = self.witness()
        return w is not None and verify_h_cover(g, self.pattern, w)
