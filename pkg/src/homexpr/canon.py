"""Canonical forms, isomorphism tests, and automorphism counting.

The canonical form is computed nauty-style: iterated equitable refinement of
an ordered partition (seeded by labels and root positions), then backtracking
over individualizations of the first non-singleton cell.  The minimum leaf
key over all branches is the canonical form; the number of leaves attaining
it equals |Aut| (the search tree is Aut-invariant and the action on leaves is
free).  Adequate and dependency-free at the package's size limits.
"""

from __future__ import annotations

from .errors import ResourceLimitError
from .graphs import Graph, RootedGraph, as_rooted

_MAX_LEAVES = 500_000


class CanonicalForm:
    """Opaque bytes; equal bytes iff the (rooted, labeled) graphs are isomorphic."""

    __slots__ = ("data",)

    def __init__(self, data: bytes):
        self.data = data

    def __eq__(self, other) -> bool:
        return isinstance(other, CanonicalForm) and self.data == other.data

    def __hash__(self) -> int:
        return hash(self.data)

    def __repr__(self) -> str:
        return f"CanonicalForm({self.data.hex()[:16]}...)"


def _root_signature(roots: tuple[int, ...], v: int) -> tuple[int, ...]:
    return tuple(i for i, r in enumerate(roots) if r == v)


def _refine(adj: tuple[int, ...], cells: list[list[int]]) -> list[list[int]]:
    """Equitable refinement of an ordered partition; deterministic cell order."""
    while True:
        masks = []
        for cell in cells:
            mask = 0
            for v in cell:
                mask |= 1 << v
            masks.append(mask)
        new_cells: list[list[int]] = []
        split = False
        for cell in cells:
            if len(cell) == 1:
                new_cells.append(cell)
                continue
            sig = {v: tuple(bin(adj[v] & m).count("1") for m in masks) for v in cell}
            groups: dict[tuple, list[int]] = {}
            for v in cell:
                groups.setdefault(sig[v], []).append(v)
            if len(groups) == 1:
                new_cells.append(cell)
            else:
                split = True
                for key in sorted(groups):
                    new_cells.append(groups[key])
        cells = new_cells
        if not split:
            return cells


def _leaf_key(g: Graph, roots: tuple[int, ...], cells: list[list[int]]):
    pos = [0] * g.n
    for i, cell in enumerate(cells):
        pos[cell[0]] = i
    order = [0] * g.n
    for v in range(g.n):
        order[pos[v]] = v
    labels = tuple(g.labels[v] for v in order)
    rts = tuple(pos[r] for r in roots)
    bits = 0
    k = 0
    for j in range(g.n):
        aj = g.adj[order[j]]
        for i in range(j):
            bits = (bits << 1) | ((aj >> order[i]) & 1)
            k += 1
    return (labels, rts, bits)


def _search(g: Graph, roots: tuple[int, ...]) -> tuple[tuple, int]:
    """Return (minimum leaf key, number of leaves attaining it)."""
    adj = g.adj
    init: dict[tuple, list[int]] = {}
    for v in range(g.n):
        init.setdefault((g.labels[v], _root_signature(roots, v)), []).append(v)
    cells = [init[k] for k in sorted(init)]
    cells = _refine(adj, cells)

    best: list = [None, 0]
    leaves = [0]

    def descend(cells: list[list[int]]) -> None:
        target = next((i for i, c in enumerate(cells) if len(c) > 1), None)
        if target is None:
            leaves[0] += 1
            if leaves[0] > _MAX_LEAVES:
                raise ResourceLimitError("canonical-form search exceeded leaf budget")
            key = _leaf_key(g, roots, cells)
            if best[0] is None or key < best[0]:
                best[0], best[1] = key, 1
            elif key == best[0]:
                best[1] += 1
            return
        cell = cells[target]
        for v in cell:
            rest = [u for u in cell if u != v]
            branched = cells[:target] + [[v], rest] + cells[target + 1:]
            descend(_refine(adj, branched))

    descend(cells)
    return best[0], best[1]


_cache: dict[RootedGraph, tuple[CanonicalForm, int]] = {}


def _canon_data(rg: RootedGraph) -> tuple[CanonicalForm, int]:
    cached = _cache.get(rg)
    if cached is not None:
        return cached
    g = rg.graph
    if g.m == 0:
        keyed = sorted((g.labels[v], _root_signature(rg.roots, v)) for v in range(g.n))
        pos = {}
        for i, v in enumerate(sorted(range(g.n), key=lambda v: (g.labels[v], _root_signature(rg.roots, v)))):
            pos[v] = i
        key = (tuple(k[0] for k in keyed), tuple(pos[r] for r in rg.roots), 0)
        aut = 1
        run = 1
        for i in range(1, len(keyed)):
            run = run + 1 if keyed[i] == keyed[i - 1] else 1
            aut *= run
        result = (CanonicalForm(repr((g.n, key)).encode()), aut)
    else:
        key, aut = _search(g, rg.roots)
        result = (CanonicalForm(repr((g.n, key)).encode()), aut)
    if len(_cache) > 400_000:
        _cache.clear()
    _cache[rg] = result
    return result


def canonical_form(rg: Graph | RootedGraph) -> CanonicalForm:
    return _canon_data(as_rooted(rg))[0]


def are_isomorphic(a: Graph | RootedGraph, b: Graph | RootedGraph) -> bool:
    ra, rb = as_rooted(a), as_rooted(b)
    if (
        ra.graph.n != rb.graph.n
        or ra.graph.m != rb.graph.m
        or len(ra.roots) != len(rb.roots)
        or sorted(ra.graph.labels) != sorted(rb.graph.labels)
    ):
        return False
    return canonical_form(ra) == canonical_form(rb)


def automorphism_count(g: Graph | RootedGraph) -> int:
    """|Aut| respecting labels (and root positions for rooted inputs)."""
    return _canon_data(as_rooted(g))[1]
