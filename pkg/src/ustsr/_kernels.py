"""Compiled inner loops: Pruefer decoding, random-walk covering, cycle counting."""

import numpy as np
from numba import njit


@njit(cache=True)
def prufer_decode_parent(seq, n):
    """Linear-time Pruefer decoding into a parent array rooted at ``n - 1``."""
    parent = np.empty(n, dtype=np.int64)
    deg = np.ones(n, dtype=np.int64)
    for i in range(n - 2):
        deg[seq[i]] += 1
    ptr = 0
    while deg[ptr] != 1:
        ptr += 1
    leaf = ptr
    for i in range(n - 2):
        x = seq[i]
        parent[leaf] = x
        deg[x] -= 1
        if deg[x] == 1 and x < ptr:
            leaf = x
        else:
            ptr += 1
            while deg[ptr] != 1:
                ptr += 1
            leaf = ptr
    parent[leaf] = n - 1
    parent[n - 1] = -1
    return parent


@njit(cache=True)
def covering_walk(indptr, indices, lazy, uniforms, cur, visited, parent, nvisited):
    """Advance a random walk until every vertex is seen or ``uniforms`` runs out.

    First-entrance edges are written into ``parent``.  Returns the current
    vertex, the number of visited vertices and how many uniforms were used.
    """
    n = visited.shape[0]
    used = 0
    m = uniforms.shape[0]
    while nvisited < n and used < m:
        x = uniforms[used]
        used += 1
        start = indptr[cur]
        d = indptr[cur + 1] - start
        if lazy:
            j = int(x * (d + 1))
            if j > d:
                j = d
            if j == d:
                continue
        else:
            j = int(x * d)
            if j >= d:
                j = d - 1
        nxt = indices[start + j]
        if not visited[nxt]:
            visited[nxt] = True
            parent[nxt] = cur
            nvisited += 1
        cur = nxt
    return cur, nvisited, used


@njit(cache=True)
def permutation_cycle_moments(perms):
    """Per cycle length, the sum and sum of squares of cycle counts over rows."""
    rows, m = perms.shape
    total = np.zeros(m + 1, dtype=np.float64)
    total_sq = np.zeros(m + 1, dtype=np.float64)
    seen = np.zeros(m, dtype=np.bool_)
    hist = np.zeros(m + 1, dtype=np.int64)
    for r in range(rows):
        seen[:] = False
        hist[:] = 0
        for s in range(m):
            if seen[s]:
                continue
            length = 0
            x = s
            while not seen[x]:
                seen[x] = True
                x = perms[r, x]
                length += 1
            hist[length] += 1
        for L in range(1, m + 1):
            if hist[L]:
                total[L] += hist[L]
                total_sq[L] += hist[L] * hist[L]
    return total, total_sq


@njit(cache=True)
def min_degree_pick(eu, ev, deg, adj, lo, x, buf):
    """Index of a uniformly chosen new tree edge in the best degree class.

    Classes, best first: both ends of degree ``lo``; one end ``lo`` and the
    other ``lo + 1``; both ends ``lo + 1``.  Every degree is assumed to be at
    least ``lo``.  ``buf`` is scratch space of shape ``(3, len(eu))``.
    Returns ``(index, class)`` or ``(-1, -1)`` when no tree edge qualifies.
    """
    m = eu.shape[0]
    c0 = 0
    c1 = 0
    c2 = 0
    for i in range(m):
        a = deg[eu[i]] - lo
        b = deg[ev[i]] - lo
        if (a | b) > 1:
            continue
        c = a + b
        if c == 0:
            buf[0, c0] = i
            c0 += 1
        elif c == 1:
            buf[1, c1] = i
            c1 += 1
        else:
            buf[2, c2] = i
            c2 += 1
    for c in range(3):
        cnt = c0 if c == 0 else (c1 if c == 1 else c2)
        # uniform among candidates not yet in the graph, by rejection with swap-removal
        while cnt > 0:
            t = int(x * cnt)
            if t >= cnt:
                t = cnt - 1
            i = buf[c, t]
            if not adj[eu[i], ev[i]]:
                return i, c
            # the fractional part of x * cnt is again uniform and independent of t
            x = x * cnt - t
            cnt -= 1
            buf[c, t] = buf[c, cnt]
    return -1, -1
