"""Exhaustive enumeration of small connected graphs and their rootings.

Generation grows graphs edge by edge from K2 (plus K1), adding either an edge
between existing vertices or a fresh pendant vertex, and rejects duplicates by
canonical form.  Every connected graph with m+1 edges arises from a connected
graph with m edges this way (delete a non-bridge edge, or a leaf edge of a
tree), so each isomorphism class is produced exactly once.
"""

from __future__ import annotations

from typing import Iterator, Optional

from .canon import CanonicalForm, canonical_form
from .errors import ResourceLimitError
from .graphs import Graph, RootedGraph
from .limits import LIMITS, Limits


def enumerate_connected_graphs(
    max_vertices: Optional[int] = None,
    max_edges: Optional[int] = None,
    limits: Limits = LIMITS,
) -> Iterator[Graph]:
    """One representative per isomorphism class of connected unlabeled graphs.

    At least one bound must be given; yields graphs with n <= max_vertices
    (if set) and m <= max_edges (if set), ordered by (m, n, canonical form).
    """
    if max_vertices is None and max_edges is None:
        raise ValueError("need max_vertices or max_edges")
    if max_vertices is not None and max_vertices > limits.max_enum_vertices:
        raise ResourceLimitError(
            f"enumeration bound n={max_vertices} exceeds limit {limits.max_enum_vertices}"
        )
    if max_edges is not None and max_edges > limits.max_enum_edges:
        raise ResourceLimitError(
            f"enumeration bound m={max_edges} exceeds limit {limits.max_enum_edges}"
        )
    n_cap = max_vertices if max_vertices is not None else max_edges + 1
    m_cap = max_edges if max_edges is not None else max_vertices * (max_vertices - 1) // 2

    if n_cap >= 1:
        yield Graph(1)
    level: dict[CanonicalForm, Graph] = {}
    if n_cap >= 2 and m_cap >= 1:
        k2 = Graph(2, [(0, 1)])
        level[canonical_form(k2)] = k2
    m = 1
    while level and m <= m_cap:
        for key in sorted(level, key=lambda c: c.data):
            yield level[key]
        if m == m_cap:
            break
        nxt: dict[CanonicalForm, Graph] = {}
        for g in level.values():
            for u in range(g.n):
                for v in range(u + 1, g.n):
                    if not g.has_edge(u, v):
                        child = Graph(g.n, list(g.edges) + [(u, v)])
                        nxt.setdefault(canonical_form(child), child)
            if g.n < n_cap:
                for u in range(g.n):
                    child = Graph(g.n + 1, list(g.edges) + [(u, g.n)])
                    nxt.setdefault(canonical_form(child), child)
        level = nxt
        m += 1


def enumerate_rooted(g: Graph, marks: int) -> list[RootedGraph]:
    """One rooted graph per orbit: single marks, or ordered pairs of distinct marks."""
    if marks not in (1, 2):
        raise ValueError("marks must be 1 or 2")
    seen: dict[CanonicalForm, RootedGraph] = {}
    if marks == 1:
        candidates = (RootedGraph(g, (u,)) for u in range(g.n))
    else:
        candidates = (
            RootedGraph(g, (u, v)) for u in range(g.n) for v in range(g.n) if u != v
        )
    for rg in candidates:
        seen.setdefault(canonical_form(rg), rg)
    return [seen[k] for k in sorted(seen, key=lambda c: c.data)]
