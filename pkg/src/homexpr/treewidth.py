"""Exact treewidth by dynamic programming over elimination prefixes.

f(S) = width of the best elimination order that eliminates exactly the set S
first, where eliminating v from a prefix costs the number of vertices outside
the prefix reachable from v through it.  tw(G) = f(V).  O(2^n * n^2) with
bitsets; exact for every input within the size limit.

Convention: graphs with no edges (including the empty graph) have treewidth 0.
The standard facts (forest with an edge <-> 1, K_n <-> n-1) are untouched.
"""

from __future__ import annotations

from .errors import ResourceLimitError
from .graphs import Graph
from .limits import LIMITS, Limits


def _elimination_cost(adj: tuple[int, ...], prefix: int, v: int, full: int) -> int:
    # vertices outside prefix+{v} reachable from v via vertices inside prefix
    seen = 1 << v
    stack = adj[v]
    reach = 0
    inside = prefix
    while stack:
        low = stack & -stack
        u = low.bit_length() - 1
        stack ^= low
        if seen >> u & 1:
            continue
        seen |= low
        if inside >> u & 1:
            stack |= adj[u] & ~seen
        else:
            reach |= low
    return bin(reach & full).count("1")


def treewidth(g: Graph, limits: Limits = LIMITS) -> int:
    if g.n > limits.max_treewidth_vertices:
        raise ResourceLimitError(
            f"treewidth limited to {limits.max_treewidth_vertices} vertices, got {g.n}"
        )
    if g.m == 0:
        return 0
    n = g.n
    adj = g.adj
    full = (1 << n) - 1
    INF = n + 1
    f = [INF] * (1 << n)
    f[0] = 0
    for s in range(1, 1 << n):
        best = INF
        rest = s
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            rest ^= low
            prev = f[s ^ low]
            if prev >= best:
                continue
            cost = _elimination_cost(adj, s ^ low, v, full)
            width = prev if prev > cost else cost
            if width < best:
                best = width
        f[s] = best
    return f[full]
