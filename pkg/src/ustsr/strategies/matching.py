"""Saturating one side of a bipartition with a matching, and the matching strategy."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from ..graphs import Edge, SimpleGraph, is_perfect_matching
from ..sampling import SpanningTree
from .base import Program, Strategy


def default_omega(n: int, s: int) -> float:
    return max(2.0, math.sqrt(s / n**0.75))


class BipartiteMatcher:
    """Builds a matching covering ``A`` into ``B`` (``|B| >= |A|``) in three stages.

    1. greedy: take any tree edge joining an unmatched ``a`` to an unmatched
       ``b``, for ``s - m/2`` rounds where ``m = ceil(omega sqrt n)``;
    2. stars: give every still-unmatched ``a`` up to ``n^(1/4)`` private
       leaves among the matched ``B`` vertices;
    3. augment: an edge from an unmatched ``b`` to the partner ``x`` of a leaf
       of centre ``c`` closes the path ``c - leaf - x - b``, which is flipped.

    A direct unmatched-to-unmatched edge is always taken first when the tree
    offers one.  If a stage would be empty the matcher stays greedy.
    """

    def __init__(
        self,
        n: int,
        A: Sequence[int],
        B: Sequence[int],
        omega: float | None = None,
        prefer_new: bool = True,
        leaves: int | None = None,
        star_budget: int | None = None,
        augment_budget: int | None = None,
    ):
        self.n = n
        self.A = np.asarray(A, dtype=np.int64)
        self.B = np.asarray(B, dtype=np.int64)
        self.s = s = len(self.A)
        if len(self.B) < s:
            raise ValueError("need |B| >= |A|")
        self.inA = np.zeros(n, dtype=np.bool_)
        self.inB = np.zeros(n, dtype=np.bool_)
        self.inA[self.A] = True
        self.inB[self.B] = True
        if (self.inA & self.inB).any() or self.inA.sum() != s or self.inB.sum() != len(self.B):
            raise ValueError("A and B must be disjoint sets of distinct vertices")
        self.mate = np.full(n, -1, dtype=np.int64)
        self.unA = self.inA.copy()
        self.unB = self.inB.copy()
        self.matched = 0
        self.prefer_new = prefer_new
        self.omega = default_omega(n, s) if omega is None else omega
        self.m = math.ceil(self.omega * math.sqrt(n))
        self.greedy_rounds = int(s - self.m / 2)
        self.leaves = round(n**0.25) if leaves is None else leaves
        self.star_budget = 5 * self.m * max(self.leaves, 1) if star_budget is None else star_budget
        self.augment_budget = (
            4 * math.ceil(self.omega * n**0.75) if augment_budget is None else augment_budget
        )
        self.stage = "greedy"
        self.rounds = 0
        self.stage_rounds: dict[str, int] = {}

    @property
    def done(self) -> bool:
        return self.matched == self.s

    def pairs(self) -> list[Edge]:
        return [(int(a), int(self.mate[a])) for a in self.A if self.mate[a] >= 0]

    def _link(self, a: int, b: int) -> None:
        self.mate[a] = b
        self.mate[b] = a

    def _take(self, owner: Strategy, tree: SpanningTree, mask: np.ndarray) -> Edge | None:
        idx = np.flatnonzero(mask)
        if idx.size == 0:
            return None
        if self.prefer_new:
            fresh = ~owner.g.has_edges(tree.u[idx], tree.v[idx])
            if fresh.any():
                idx = idx[fresh]
        return owner.pick_index(tree, idx)

    def _direct(self, owner: Strategy, tree: SpanningTree) -> Edge | None:
        u, v = tree.u, tree.v
        e = self._take(owner, tree, (self.unA[u] & self.unB[v]) | (self.unB[u] & self.unA[v]))
        if e is not None:
            a, b = e if self.inA[e[0]] else (e[1], e[0])
            self._link(a, b)
            self.unA[a] = False
            self.unB[b] = False
            self.matched += 1
        return e

    def _tick(self) -> None:
        self.rounds += 1
        self.stage_rounds[self.stage] = self.stage_rounds.get(self.stage, 0) + 1

    def run(self, owner: Strategy, tree: SpanningTree):
        """Generator consuming rounds until ``A`` is saturated; returns the next unused tree."""
        three_stage = self.greedy_rounds >= 1 and self.m >= 2 and self.leaves >= 1
        limit = self.greedy_rounds if three_stage else math.inf
        while not self.done and self.rounds < limit:
            e = self._direct(owner, tree)
            self._tick()
            tree = yield e
        if three_stage and not self.done:
            tree = yield from self._stars(owner, tree)
            tree = yield from self._augment(owner, tree)
        self.stage = "greedy"
        while not self.done:
            e = self._direct(owner, tree)
            self._tick()
            tree = yield e
        self.stage = "done"
        return tree

    def _stars(self, owner: Strategy, tree: SpanningTree):
        n = self.n
        centres = np.flatnonzero(self.unA)
        b_matched = self.inB & ~self.unB
        L = min(self.leaves, int(b_matched.sum()) // max(len(centres), 1))
        self.leaf_target = L
        self.owner_of = np.full(n, -1, dtype=np.int64)
        self.candidate_x = np.zeros(n, dtype=np.bool_)
        self.owned: dict[int, list[int]] = {int(c): [] for c in centres}
        if L < 1:
            return tree
        self.stage = "stars"
        leafcount = np.zeros(n, dtype=np.int64)
        needy = self.unA.copy()
        free_leaf = b_matched.copy()
        spent = 0
        while not self.done and needy.any() and spent < self.star_budget:
            e = self._direct(owner, tree)
            if e is not None:
                c = e[0] if self.inA[e[0]] else e[1]
                needy[c] = False
                self._release(c)
            else:
                u, v = tree.u, tree.v
                e = self._take(owner, tree, (needy[u] & free_leaf[v]) | (free_leaf[u] & needy[v]))
                if e is not None:
                    c, leaf = e if needy[e[0]] else (e[1], e[0])
                    free_leaf[leaf] = False
                    leafcount[c] += 1
                    if leafcount[c] >= L:
                        needy[c] = False
                    x = int(self.mate[leaf])
                    self.owner_of[x] = c
                    self.candidate_x[x] = True
                    self.owned[int(c)].append(x)
            spent += 1
            self._tick()
            tree = yield e
        return tree

    def _release(self, c: int) -> None:
        for x in self.owned.get(int(c), ()):
            self.candidate_x[x] = False
            self.owner_of[x] = -1
        self.owned[int(c)] = []

    def _augment(self, owner: Strategy, tree: SpanningTree):
        self.stage = "augment"
        spent = 0
        while not self.done and spent < self.augment_budget:
            e = self._direct(owner, tree)
            if e is not None:
                self._release(e[0] if self.inA[e[0]] else e[1])
            else:
                u, v = tree.u, tree.v
                e = self._take(owner, tree, (self.unB[u] & self.candidate_x[v]) | (self.candidate_x[u] & self.unB[v]))
                if e is not None:
                    b2, x = e if self.unB[e[0]] else (e[1], e[0])
                    c = int(self.owner_of[x])
                    leaf = int(self.mate[x])
                    self._link(x, b2)
                    self._link(c, leaf)
                    self.unB[b2] = False
                    self.unA[c] = False
                    self.matched += 1
                    self._release(c)
            spent += 1
            self._tick()
            tree = yield e
        return tree


class PerfectMatching(Strategy):
    """Perfect matching between ``A = {0..s-1}`` and ``B = {s..2s-1}``."""

    name = "matching"

    def __init__(self, s: int | None = None, omega: float | None = None, prefer_new: bool = True):
        self.s = s
        self.omega = omega
        self.prefer_new = prefer_new

    def reset(self, n: int, rng: np.random.Generator) -> None:
        s = n // 2 if self.s is None else self.s
        if not 1 <= s <= n // 2:
            raise ValueError("need 1 <= s <= n/2")
        self.A = list(range(s))
        self.B = list(range(s, 2 * s))
        self.matcher = BipartiteMatcher(n, self.A, self.B, omega=self.omega, prefer_new=self.prefer_new)
        super().reset(n, rng)

    def program(self) -> Program:
        tree = yield
        self.phase = "matching"
        tree = yield from self.matcher.run(self, tree)
        self.finish(self.matcher.pairs())

    def holds(self, g: SimpleGraph) -> bool:
        w = self.witness()
        return w is not None and is_perfect_matching(g, w, self.A + self.B)

    def prediction(self, n: int) -> float:
        return float(n // 2 if self.s is None else self.s)
