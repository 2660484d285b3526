"""Graphs built by the process, small pattern graphs, and property validators."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_flow

Edge = tuple[int, int]

# Graphs up to this order also keep a dense boolean adjacency matrix so that
# membership of a whole batch of tree edges can be tested in one numpy call.
DENSE_LIMIT = 8192


def canon(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class SimpleGraph:
    """An undirected simple graph on ``0..n-1`` that only ever gains edges.

    Degrees and the degree histogram are kept up to date on every insertion,
    so strategies can read ``degrees`` and ``degree_counts`` directly.
    """

    def __init__(self, n: int, dense: bool | None = None):
        if n < 1:
            raise ValueError("a graph needs at least one vertex")
        self.n = n
        self.adj: list[set[int]] = [set() for _ in range(n)]
        self.degrees = np.zeros(n, dtype=np.int64)
        self.degree_counts = np.zeros(n + 1, dtype=np.int64)
        self.degree_counts[0] = n
        self.m = 0
        if dense is None:
            dense = n <= DENSE_LIMIT
        self._matrix = np.zeros((n, n), dtype=np.bool_) if dense else None

    def _check(self, u: int, v: int) -> None:
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise ValueError(f"edge ({u}, {v}) has an endpoint outside 0..{self.n - 1}")
        if u == v:
            raise ValueError(f"loop at {u} rejected")

    def add_edge(self, u: int, v: int) -> bool:
        """Insert ``uv``; returns False if it was already present."""
        u, v = int(u), int(v)
        self._check(u, v)
        if v in self.adj[u]:
            return False
        self.adj[u].add(v)
        self.adj[v].add(u)
        for x in (u, v):
            d = self.degrees[x]
            self.degree_counts[d] -= 1
            self.degree_counts[d + 1] += 1
            self.degrees[x] = d + 1
        if self._matrix is not None:
            self._matrix[u, v] = True
            self._matrix[v, u] = True
        self.m += 1
        return True

    def has_edge(self, u: int, v: int) -> bool:
        return int(v) in self.adj[int(u)]

    def has_edges(self, us: np.ndarray, vs: np.ndarray) -> np.ndarray:
        """Vectorised membership test for the pairs ``(us[i], vs[i])``."""
        if self._matrix is not None:
            return self._matrix[us, vs]
        adj = self.adj
        return np.fromiter((int(b) in adj[int(a)] for a, b in zip(us, vs)), dtype=np.bool_, count=len(us))

    def neighbors(self, v: int) -> set[int]:
        return self.adj[v]

    def degree(self, v: int) -> int:
        return int(self.degrees[v])

    @property
    def min_degree(self) -> int:
        return int(np.flatnonzero(self.degree_counts)[0])

    @property
    def max_degree(self) -> int:
        return int(np.flatnonzero(self.degree_counts)[-1])

    def count_degree_below(self, d: int) -> int:
        """Number of vertices whose degree is strictly less than ``d``."""
        return int(self.degree_counts[: max(d, 0)].sum())

    def edges(self) -> Iterator[Edge]:
        for u in range(self.n):
            for v in sorted(self.adj[u]):
                if u < v:
                    yield (u, v)

    def is_complete(self) -> bool:
        return self.m == self.n * (self.n - 1) // 2

    def copy(self) -> "SimpleGraph":
        h = SimpleGraph(self.n, dense=self._matrix is not None)
        for u, v in self.edges():
            h.add_edge(u, v)
        return h

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge]) -> "SimpleGraph":
        g = cls(n)
        for u, v in edges:
            g.add_edge(u, v)
        return g

    def __repr__(self) -> str:
        return f"SimpleGraph(n={self.n}, m={self.m})"


def write_edge_list(g: SimpleGraph, path: str | Path) -> None:
    """Write ``n m`` on the first line, then one ``u v`` line per edge."""
    with open(path, "w") as fh:
        fh.write(f"{g.n} {g.m}\n")
        for u, v in g.edges():
            fh.write(f"{u} {v}\n")


def read_edge_list(path: str | Path) -> SimpleGraph:
    with open(path) as fh:
        n, m = map(int, fh.readline().split())
        g = SimpleGraph(n)
        for line in fh:
            if line.strip():
                u, v = map(int, line.split())
                g.add_edge(u, v)
    if g.m != m:
        raise ValueError(f"header promises {m} edges, file has {g.m}")
    return g


@dataclass(frozen=True)
class PatternGraph:
    """A small fixed graph ``H`` on vertices ``0..order-1``.

    ``root`` is the search root used by tree factors and covers; ``witness``
    is a central vertex when one is known.
    """

    order: int
    edges: tuple[Edge, ...]
    root: int | None = None
    witness: int | None = None
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("pattern needs at least one vertex")
        seen = set()
        out = []
        for u, v in self.edges:
            if u == v or not (0 <= u < self.order and 0 <= v < self.order):
                raise ValueError(f"bad pattern edge ({u}, {v})")
            e = canon(u, v)
            if e not in seen:
                seen.add(e)
                out.append(e)
        object.__setattr__(self, "edges", tuple(out))

    @property
    def size(self) -> int:
        return len(self.edges)

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.order)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    @property
    def min_degree(self) -> int:
        return min(self.degree(v) for v in range(self.order))

    def components(self, removed: Iterable[int] = ()) -> list[list[int]]:
        """Connected components of ``H`` minus ``removed``, each sorted."""
        gone = set(removed)
        adj = self.adjacency()
        comp: list[list[int]] = []
        seen = set(gone)
        for s in range(self.order):
            if s in seen:
                continue
            stack, part = [s], []
            seen.add(s)
            while stack:
                x = stack.pop()
                part.append(x)
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            comp.append(sorted(part))
        return comp

    def is_connected(self) -> bool:
        return len(self.components()) == 1

    def is_tree(self) -> bool:
        return self.size == self.order - 1 and self.is_connected()

    def dfs_edges(self, root: int | None = None) -> list[Edge]:
        """Tree edges in depth-first discovery order, each as ``(parent, child)``."""
        root = (self.root or 0) if root is None else root
        adj = self.adjacency()
        seen = {root}
        out: list[Edge] = []

        def visit(x: int) -> None:
            for y in sorted(adj[x]):
                if y not in seen:
                    seen.add(y)
                    out.append((x, y))
                    visit(y)

        visit(root)
        return out

    @classmethod
    def complete(cls, r: int) -> "PatternGraph":
        return cls(r, tuple(itertools.combinations(range(r), 2)), name=f"k{r}")

    @classmethod
    def path(cls, r: int) -> "PatternGraph":
        return cls(r, tuple((i, i + 1) for i in range(r - 1)), name=f"p{r}")

    @classmethod
    def star(cls, leaves: int) -> "PatternGraph":
        return cls(leaves + 1, tuple((0, i) for i in range(1, leaves + 1)), root=0, witness=0, name=f"star{leaves}")

    @classmethod
    def cycle(cls, r: int) -> "PatternGraph":
        return cls(r, tuple((i, (i + 1) % r) for i in range(r)), name=f"c{r}")

    @classmethod
    def named(cls, name: str) -> "PatternGraph":
        """Parse ``k2``, ``p3``, ``triangle``, ``star<r>``, ``k<r>``, ``p<r>`` or ``c<r>``."""
        key = name.strip().lower()
        if key == "triangle":
            return cls.complete(3)
        m = re.fullmatch(r"(star|k|p|c)(\d+)", key)
        if not m:
            raise ValueError(f"unknown pattern {name!r}")
        kind, r = m.group(1), int(m.group(2))
        builders = {"star": cls.star, "k": cls.complete, "p": cls.path, "c": cls.cycle}
        return builders[kind](r)


def is_central(pattern: PatternGraph) -> int | None:
    """Smallest vertex all of whose incident edges are bridges, or None."""
    base = len(pattern.components())
    for v in range(pattern.order):
        incident = [e for e in pattern.edges if v in e]
        if not incident:
            continue
        ok = True
        for e in incident:
            rest = PatternGraph(pattern.order, tuple(f for f in pattern.edges if f != e))
            if len(rest.components()) == base:
                ok = False
                break
        if ok:
            return v
    return None


def is_perfect_matching(g: SimpleGraph, pairs: Iterable[Edge], vertices: Iterable[int] | None = None) -> bool:
    """True iff ``pairs`` are disjoint edges of ``g`` covering ``vertices`` exactly."""
    covered: set[int] = set()
    for a, b in pairs:
        if a == b or not g.has_edge(a, b) or a in covered or b in covered:
            return False
        covered.update((a, b))
    target = set(range(g.n)) if vertices is None else set(vertices)
    return covered == target


def is_hamiltonian_cycle_witness(g: SimpleGraph, order: Sequence[int]) -> bool:
    n = g.n
    if n < 3 or len(order) != n or set(order) != set(range(n)):
        return False
    return all(g.has_edge(order[i], order[(i + 1) % n]) for i in range(n))


def verify_h_factor(g: SimpleGraph, pattern: PatternGraph, placement: Sequence[Sequence[int]]) -> bool:
    """Check ``floor(n/|H|)`` vertex-disjoint copies of ``pattern`` in ``g``."""
    h = pattern.order
    if len(placement) != g.n // h:
        return False
    used: set[int] = set()
    for copy in placement:
        if len(copy) != h or len(set(copy)) != h:
            return False
        if any(not (0 <= x < g.n) or x in used for x in copy):
            return False
        used.update(copy)
        if any(not g.has_edge(copy[a], copy[b]) for a, b in pattern.edges):
            return False
    return True


def verify_h_cover(
    g: SimpleGraph,
    pattern: PatternGraph,
    placement: Mapping[int, Sequence[int]] | Sequence[Sequence[int]],
) -> bool:
    """Check that every vertex ``v`` lies in the copy ``placement[v]`` of ``pattern``."""
    h = pattern.order
    for v in range(g.n):
        try:
            copy = placement[v]
        except (KeyError, IndexError):
            return False
        if copy is None or len(copy) != h or len(set(copy)) != h or v not in copy:
            return False
        if any(not (0 <= x < g.n) for x in copy):
            return False
        if any(not g.has_edge(copy[a], copy[b]) for a, b in pattern.edges):
            return False
    return True


def cycle_decomposition(m1: Iterable[Edge], m2: Iterable[Edge]) -> list[list[int]]:
    """Split the union of two perfect matchings on one vertex set into cycles.

    Each cycle is listed in traversal order, starting with an ``m1`` edge.  A
    shared edge yields a cycle of length two.
    """
    p1: dict[int, int] = {}
    p2: dict[int, int] = {}
    for partner, pairs, label in ((p1, m1, "first"), (p2, m2, "second")):
        for a, b in pairs:
            if a == b or a in partner or b in partner:
                raise ValueError(f"{label} argument is not a matching")
            partner[a] = b
            partner[b] = a
    if p1.keys() != p2.keys():
        raise ValueError("matchings cover different vertex sets")
    seen: set[int] = set()
    cycles = []
    for s in sorted(p1):
        if s in seen:
            continue
        cyc = [s]
        seen.add(s)
        x, use_first = p1[s], False
        while x != s:
            cyc.append(x)
            seen.add(x)
            x = p2[x] if not use_first else p1[x]
            use_first = not use_first
        cycles.append(cyc)
    return cycles


def _split_network(g: SimpleGraph) -> csr_matrix:
    # vertex v becomes v_in = v and v_out = n + v joined by a unit arc
    n = g.n
    big = n
    rows = [np.arange(n)]
    cols = [np.arange(n) + n]
    caps = [np.ones(n, dtype=np.int32)]
    us, vs = [], []
    for u, v in g.edges():
        us.append(u)
        vs.append(v)
    if us:
        us_a = np.asarray(us)
        vs_a = np.asarray(vs)
        rows += [us_a + n, vs_a + n]
        cols += [vs_a, us_a]
        caps += [np.full(len(us), big, dtype=np.int32)] * 2
    r = np.concatenate(rows)
    c = np.concatenate(cols)
    d = np.concatenate(caps).astype(np.int32)
    return csr_matrix((d, (r, c)), shape=(2 * n, 2 * n))


def local_connectivity(g: SimpleGraph, s: int, t: int, network: csr_matrix | None = None) -> int:
    """Maximum number of internally disjoint ``s``-``t`` paths, for non-adjacent s, t."""
    if s == t or g.has_edge(s, t):
        raise ValueError("local connectivity is taken between distinct non-adjacent vertices")
    if network is None:
        network = _split_network(g)
    return int(maximum_flow(network, s + g.n, t).flow_value)


def _witness_pairs(g: SimpleGraph) -> Iterator[tuple[int, int]]:
    # a minimum separator always separates one of these pairs
    v = int(np.argmin(g.degrees))
    nv = g.adj[v]
    for w in range(g.n):
        if w != v and w not in nv:
            yield v, w
    for x, y in itertools.combinations(sorted(nv), 2):
        if not g.has_edge(x, y):
            yield x, y


def vertex_connectivity(g: SimpleGraph) -> int:
    if g.is_complete():
        return g.n - 1
    network = _split_network(g)
    return min(local_connectivity(g, s, t, network) for s, t in _witness_pairs(g))


def vertex_connectivity_at_least(g: SimpleGraph, k: int) -> bool:
    """Decide ``kappa(g) >= k``; the complete graph counts as ``(n-1)``-connected."""
    if k <= 0:
        return True
    if k > g.n - 1:
        return False
    if g.is_complete():
        return True
    if g.min_degree < k:
        return False
    network = _split_network(g)
    return all(local_connectivity(g, s, t, network) >= k for s, t in _witness_pairs(g))
