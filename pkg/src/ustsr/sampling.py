"""Uniform spanning trees: Pruefer sampling on K_n, random-walk covering on any graph."""

from __future__ import annotations

import heapq
import itertools
import math
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from ._kernels import covering_walk, prufer_decode_parent
from .graphs import Edge, SimpleGraph, canon

MASK64 = (1 << 64) - 1
GOLDEN64 = 0x9E3779B97F4A7C15


def trial_seed(seed: int, index: int) -> int:
    """Seed of trial ``index``: the master seed xor a golden-ratio multiple of the index."""
    return (int(seed) ^ ((GOLDEN64 * int(index)) & MASK64)) & MASK64


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed) & MASK64))


class SpanningTree:
    """A spanning tree stored as a parent array; ``parent[root] == -1``.

    ``u`` and ``v`` hold the edges as canonical ``u < v`` pairs, one per
    non-root vertex, which is what strategies scan.
    """

    __slots__ = ("n", "parent", "root", "_u", "_v", "_adj")

    def __init__(self, parent: np.ndarray, root: int):
        self.n = len(parent)
        self.parent = parent
        self.root = root
        self._u = None
        self._v = None
        self._adj = None

    def _arrays(self) -> None:
        if self.root == self.n - 1:
            child = np.arange(self.n - 1)
            par = self.parent[:-1]
        else:
            child = np.flatnonzero(self.parent >= 0)
            par = self.parent[child]
        self._u = np.minimum(child, par)
        self._v = np.maximum(child, par)

    @property
    def u(self) -> np.ndarray:
        if self._u is None:
            self._arrays()
        return self._u

    @property
    def v(self) -> np.ndarray:
        if self._v is None:
            self._arrays()
        return self._v

    def contains(self, a: int, b: int) -> bool:
        p = self.parent
        return a != b and (p[a] == b or p[b] == a)

    def edges(self) -> list[Edge]:
        return sorted(zip(self.u.tolist(), self.v.tolist()))

    def neighbors(self, x: int) -> list[int]:
        if self._adj is None:
            adj: list[list[int]] = [[] for _ in range(self.n)]
            for a, b in zip(self.u.tolist(), self.v.tolist()):
                adj[a].append(b)
                adj[b].append(a)
            self._adj = adj
        return self._adj[x]

    def degrees(self) -> np.ndarray:
        return np.bincount(np.concatenate([self.u, self.v]), minlength=self.n)

    def prufer(self) -> tuple[int, ...]:
        return prufer_encode(self.n, self.edges())

    def __len__(self) -> int:
        return self.n - 1


def prufer_decode(seq: Sequence[int], n: int) -> SpanningTree:
    if n < 2:
        raise ValueError("trees with an edge need n >= 2")
    if len(seq) != n - 2:
        raise ValueError(f"a code for n={n} has length {n - 2}")
    arr = np.asarray(seq, dtype=np.int64)
    if arr.size and (arr.min() < 0 or arr.max() >= n):
        raise ValueError("code entries must lie in 0..n-1")
    if n == 2:
        return SpanningTree(np.array([1, -1], dtype=np.int64), 1)
    return SpanningTree(prufer_decode_parent(arr, n), n - 1)


def prufer_encode(n: int, edges: Iterable[Edge]) -> tuple[int, ...]:
    """Repeatedly strip the smallest leaf and record its neighbour."""
    adj: list[set[int]] = [set() for _ in range(n)]
    count = 0
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
        count += 1
    if count != n - 1:
        raise ValueError("not a spanning tree")
    leaves = [v for v in range(n) if len(adj[v]) == 1]
    heapq.heapify(leaves)
    out = []
    for _ in range(n - 2):
        leaf = heapq.heappop(leaves)
        (nb,) = adj[leaf]
        out.append(nb)
        adj[nb].discard(leaf)
        adj[leaf].clear()
        if len(adj[nb]) == 1:
            heapq.heappush(leaves, nb)
    return tuple(out)


def sample_ust_complete(n: int, rng: np.random.Generator) -> SpanningTree:
    """A uniform spanning tree of ``K_n`` via a uniform Pruefer code."""
    if n < 2:
        raise ValueError("need n >= 2")
    if n == 2:
        return SpanningTree(np.array([1, -1], dtype=np.int64), 1)
    return SpanningTree(prufer_decode_parent(rng.integers(0, n, size=n - 2), n), n - 1)


def complete_adjacency(n: int) -> tuple[np.ndarray, np.ndarray]:
    """CSR arrays ``(indptr, indices)`` of ``K_n``."""
    idx = np.tile(np.arange(n), n).reshape(n, n)
    mask = ~np.eye(n, dtype=bool)
    indices = idx[mask].astype(np.int64)
    indptr = np.arange(0, n * (n - 1) + 1, n - 1, dtype=np.int64)
    return indptr, indices


def graph_adjacency(g: SimpleGraph) -> tuple[np.ndarray, np.ndarray]:
    indptr = np.zeros(g.n + 1, dtype=np.int64)
    indptr[1:] = np.cumsum(g.degrees)
    indices = np.fromiter(
        itertools.chain.from_iterable(sorted(a) for a in g.adj), dtype=np.int64, count=int(indptr[-1])
    )
    return indptr, indices


def aldous_broder_tree(
    adjacency: SimpleGraph | tuple[np.ndarray, np.ndarray],
    rng: np.random.Generator,
    lazy: bool = False,
    start: int = 0,
    check_connected: bool = True,
) -> SpanningTree:
    """Uniform spanning tree from the first-entrance edges of a random walk.

    With ``lazy`` the walk stays put with probability ``1/(deg+1)``; the tree
    law is the same.  The tree is rooted at ``start``.  Pass
    ``check_connected=False`` when the graph is known to be connected, for
    example when drawing many trees of the same graph.
    """
    if isinstance(adjacency, SimpleGraph):
        indptr, indices = graph_adjacency(adjacency)
    else:
        indptr, indices = adjacency
    n = len(indptr) - 1
    if n < 1:
        raise ValueError("empty graph")
    if check_connected and n > 1:
        a = csr_matrix((np.ones(len(indices)), indices, indptr), shape=(n, n))
        if connected_components(a, directed=False)[0] != 1:
            raise ValueError("graph is not connected")
    visited = np.zeros(n, dtype=np.bool_)
    parent = np.full(n, -1, dtype=np.int64)
    visited[start] = True
    cur, seen = start, 1
    chunk = max(64, int(2 * n * math.log(n + 1)))
    while seen < n:
        cur, seen, _ = covering_walk(indptr, indices, lazy, rng.random(chunk), cur, visited, parent, seen)
    return SpanningTree(parent, start)


def enumerate_spanning_trees(n: int) -> list[SpanningTree]:
    """All ``n^(n-2)`` labelled trees on ``n`` vertices, for ``n <= 8``."""
    if n > 8:
        raise ValueError("enumeration is limited to n <= 8")
    if n < 2:
        raise ValueError("need n >= 2")
    return [prufer_decode(seq, n) for seq in itertools.product(range(n), repeat=n - 2)]


def _bareiss_det(mat: list[list[int]]) -> int:
    m = [row[:] for row in mat]
    size = len(m)
    if size == 0:
        return 1
    sign, prev = 1, 1
    for k in range(size - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, size) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // prev
        prev = pivot
    return sign * m[-1][-1]


def count_spanning_trees(n: int, edges: Iterable[Edge]) -> int:
    """Exact spanning-tree count of a simple graph by the matrix-tree theorem."""
    lap = [[0] * n for _ in range(n)]
    for a, b in {canon(a, b) for a, b in edges}:
        lap[a][a] += 1
        lap[b][b] += 1
        lap[a][b] -= 1
        lap[b][a] -= 1
    return _bareiss_det([row[1:] for row in lap[1:]])


def laplacian_minor_det(n: int, edges: Iterable[Edge]) -> Fraction:
    """The same count through plain Gaussian elimination over the rationals."""
    lap = [[Fraction(0)] * n for _ in range(n)]
    for a, b in {canon(a, b) for a, b in edges}:
        lap[a][a] += 1
        lap[b][b] += 1
        lap[a][b] -= 1
        lap[b][a] -= 1
    m = [row[1:] for row in lap[1:]]
    det = Fraction(1)
    for k in range(len(m)):
        piv = next((i for i in range(k, len(m)) if m[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            det = -det
        det *= m[k][k]
        for i in range(k + 1, len(m)):
            f = m[i][k] / m[k][k]
            if f:
                for j in range(k, len(m)):
                    m[i][j] -= f * m[k][j]
    return det
