"""Exact homomorphism, injective-homomorphism, and subgraph counting.

All counts are plain Python integers (arbitrary precision).  Rooted inputs
pin root i of the pattern to root i of the target; labels are compared for
equality.  ``hom_count`` dispatches to a tree-decomposition DP when the
pattern has treewidth <= 2, with the backtracking counter as the reference
implementation (both must agree; tests enforce it).
"""

from __future__ import annotations

from typing import Iterator

from .canon import automorphism_count
from .errors import GraphValidationError
from .graphs import Graph, RootedGraph, as_rooted, connected_components, induced_subgraph
from .limits import LIMITS
from .treewidth import treewidth


def _label_masks(g: Graph) -> dict[int, int]:
    masks: dict[int, int] = {}
    for v in range(g.n):
        masks[g.labels[v]] = masks.get(g.labels[v], 0) | (1 << v)
    return masks


def _component_patterns(rf: RootedGraph) -> list[tuple[Graph, dict[int, int], tuple[tuple[int, int], ...]]]:
    """Split the pattern into components; roots become (local vertex, root index) pins."""
    out = []
    for comp in connected_components(rf.graph):
        sub, index = induced_subgraph(rf.graph, sorted(comp))
        pins = tuple((index[r], i) for i, r in enumerate(rf.roots) if r in index)
        out.append((sub, index, pins))
    return out


def _search_order(f: Graph, pinned: list[int]) -> list[int]:
    """BFS order seeded by pinned vertices (or a max-degree vertex)."""
    order: list[int] = []
    seen = set()
    queue: list[int] = []
    seeds = pinned or [max(range(f.n), key=f.degree)]
    for s in seeds:
        if s not in seen:
            seen.add(s)
            queue.append(s)
    while queue:
        u = queue.pop(0)
        order.append(u)
        for v in sorted(f.neighbors(u), key=lambda w: -f.degree(w)):
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return order


def _count_maps(f: Graph, g: Graph, pins: dict[int, int], injective: bool) -> int:
    """Backtracking count of (injective) homomorphisms of connected f into g."""
    lmask = _label_masks(g)
    full = (1 << g.n) - 1
    for v, tv in pins.items():
        if f.labels[v] != g.labels[tv]:
            return 0
    order = _search_order(f, sorted(pins))
    placed_adj: list[list[int]] = []
    for idx, v in enumerate(order):
        earlier = order[:idx]
        placed_adj.append([i for i, u in enumerate(earlier) if f.has_edge(u, v)])

    image = [0] * len(order)

    def rec(idx: int, used: int) -> int:
        if idx == len(order):
            return 1
        v = order[idx]
        domain = lmask.get(f.labels[v], 0)
        for j in placed_adj[idx]:
            domain &= g.adj[image[j]]
        if v in pins:
            domain &= 1 << pins[v]
        if injective:
            domain &= full ^ used
        total = 0
        while domain:
            low = domain & -domain
            domain ^= low
            image[idx] = low.bit_length() - 1
            total += rec(idx + 1, used | low)
        return total

    return rec(0, 0)


def _bags_from_elimination(f: Graph) -> tuple[list[frozenset[int]], list[int]]:
    """Tree decomposition bags from a minimum-width elimination order."""
    n = f.n
    fill = [set(f.neighbors(v)) for v in range(n)]
    remaining = set(range(n))
    bags: list[frozenset[int]] = []
    elim: list[int] = []
    while remaining:
        v = min(remaining, key=lambda u: (len(fill[u] & remaining), u))
        nbrs = fill[v] & remaining - {v}
        bags.append(frozenset({v} | nbrs))
        elim.append(v)
        remaining.discard(v)
        for a in nbrs:
            fill[a] |= nbrs - {a}
    parent = [-1] * len(bags)
    pos = {v: i for i, v in enumerate(elim)}
    for i, bag in enumerate(bags):
        later = [pos[u] for u in bag if pos[u] > i]
        parent[i] = min(later) if later else -1
    return bags, parent


def _hom_dp_connected(f: Graph, g: Graph, pins: dict[int, int]) -> int:
    """Count homs of connected f into g by DP over a tree decomposition of f."""
    lmask = _label_masks(g)
    bags, parent = _bags_from_elimination(f)
    children: dict[int, list[int]] = {i: [] for i in range(len(bags))}
    roots = []
    for i, p in enumerate(parent):
        if p == -1:
            roots.append(i)
        else:
            children[p].append(i)

    def assignments(bag: list[int], fixed: dict[int, int]) -> Iterator[dict[int, int]]:
        # order bag vertices so later ones are adjacency-constrained where possible
        order: list[int] = sorted(fixed)
        rest = [v for v in bag if v not in fixed]
        while rest:
            nxt = next((v for v in rest if any(f.has_edge(v, u) for u in order)), rest[0])
            order.append(nxt)
            rest.remove(nxt)
        sigma: dict[int, int] = dict(fixed)

        def rec(k: int) -> Iterator[dict[int, int]]:
            if k == len(order):
                yield dict(sigma)
                return
            v = order[k]
            domain = lmask.get(f.labels[v], 0)
            for u in order[:k]:
                if f.has_edge(u, v):
                    domain &= g.adj[sigma[u]]
            if v in pins:
                domain &= 1 << pins[v]
            d = domain
            while d:
                low = d & -d
                d ^= low
                sigma[v] = low.bit_length() - 1
                yield from rec(k + 1)
            sigma.pop(v, None)

        # fixed part must itself satisfy bag edges and pins
        for u in fixed:
            if (u in pins and fixed[u] != pins[u]) or g.labels[fixed[u]] != f.labels[u]:
                return
            for w in fixed:
                if w < u and f.has_edge(u, w) and not g.has_edge(fixed[u], fixed[w]):
                    return
        yield from rec(len(fixed))

    def solve(node: int) -> dict[tuple, int]:
        bag = sorted(bags[node])
        sep = sorted(bags[node] & bags[parent[node]]) if parent[node] != -1 else []
        child_tables = [(c, sorted(bags[node] & bags[c])) for c in children[node]]
        solved = {c: solve(c) for c in children[node]}
        table: dict[tuple, int] = {}
        for sigma in assignments(bag, {}):
            value = 1
            for c, csep in child_tables:
                value *= solved[c].get(tuple(sigma[v] for v in csep), 0)
                if value == 0:
                    break
            if value:
                key = tuple(sigma[v] for v in sep)
                table[key] = table.get(key, 0) + value
        return table

    total = 1
    for r in roots:
        total *= sum(solve(r).values())
    return total


def hom_count(f: Graph | RootedGraph, g: Graph | RootedGraph, method: str = "auto") -> int:
    """Number of label-, edge-, and root-preserving maps V_f -> V_g."""
    rf, rg = as_rooted(f), as_rooted(g)
    if len(rf.roots) != len(rg.roots):
        raise GraphValidationError("pattern and target must have equally many roots")
    if rf.graph.n == 0:
        return 1
    if rg.graph.n == 0:
        return 0
    total = 1
    for sub, _, pin_pairs in _component_patterns(rf):
        pins = {v: rg.roots[i] for v, i in pin_pairs}
        if method == "bf":
            total *= _count_maps(sub, rg.graph, pins, injective=False)
        elif method == "dp" or (
            method == "auto"
            and sub.n <= LIMITS.max_treewidth_vertices
            and sub.n >= 4
            and treewidth(sub) <= 2
        ):
            total *= _hom_dp_connected(sub, rg.graph, pins)
        else:
            total *= _count_maps(sub, rg.graph, pins, injective=False)
        if total == 0:
            return 0
    return total


def inj_hom_count(f: Graph | RootedGraph, g: Graph | RootedGraph) -> int:
    """Injective homomorphisms; equals aut(f) * sub(f, g)."""
    rf, rg = as_rooted(f), as_rooted(g)
    if len(rf.roots) != len(rg.roots):
        raise GraphValidationError("pattern and target must have equally many roots")
    if rf.graph.n > rg.graph.n:
        return 0
    if rf.graph.n == 0:
        return 1
    # injectivity couples components, so search the whole pattern at once
    lmask = _label_masks(rg.graph)
    g0 = rg.graph
    f0 = rf.graph
    pins = {v: rg.roots[i] for i, v in enumerate(rf.roots)}
    order: list[int] = []
    for comp in connected_components(f0):
        seeds = [v for v in sorted(comp) if v in pins] or [max(comp, key=f0.degree)]
        queue = list(dict.fromkeys(seeds))
        local_seen = set(queue)
        while queue:
            u = queue.pop(0)
            order.append(u)
            for v in sorted(f0.neighbors(u)):
                if v in comp and v not in local_seen:
                    local_seen.add(v)
                    queue.append(v)
    placed_adj = [[j for j in range(i) if f0.has_edge(order[j], order[i])] for i in range(len(order))]
    image = [0] * len(order)
    full = (1 << g0.n) - 1

    def rec(idx: int, used: int) -> int:
        if idx == len(order):
            return 1
        v = order[idx]
        domain = lmask.get(f0.labels[v], 0) & (full ^ used)
        for j in placed_adj[idx]:
            domain &= g0.adj[image[j]]
        if v in pins:
            domain &= 1 << pins[v]
        total = 0
        while domain:
            low = domain & -domain
            domain ^= low
            image[idx] = low.bit_length() - 1
            total += rec(idx + 1, used | low)
        return total

    return rec(0, 0)


def enumerate_homs(f: RootedGraph, g: RootedGraph) -> Iterator[tuple[int, ...]]:
    """Yield every homomorphism as a tuple image (pattern vertex i -> value[i])."""
    if len(f.roots) != len(g.roots):
        raise GraphValidationError("pattern and target must have equally many roots")
    f0, g0 = f.graph, g.graph
    pins = {v: g.roots[i] for i, v in enumerate(f.roots)}
    lmask = _label_masks(g0)
    order: list[int] = []
    for comp in connected_components(f0):
        seeds = [v for v in sorted(comp) if v in pins] or [min(comp)]
        queue = list(dict.fromkeys(seeds))
        local_seen = set(queue)
        while queue:
            u = queue.pop(0)
            order.append(u)
            for v in sorted(f0.neighbors(u)):
                if v in comp and v not in local_seen:
                    local_seen.add(v)
                    queue.append(v)
    placed_adj = [[j for j in range(i) if f0.has_edge(order[j], order[i])] for i in range(len(order))]
    image = [0] * len(order)

    def rec(idx: int) -> Iterator[tuple[int, ...]]:
        if idx == len(order):
            out = [0] * f0.n
            for k, v in enumerate(order):
                out[v] = image[k]
            yield tuple(out)
            return
        v = order[idx]
        domain = lmask.get(f0.labels[v], 0)
        for j in placed_adj[idx]:
            domain &= g0.adj[image[j]]
        if v in pins:
            domain &= 1 << pins[v]
        while domain:
            low = domain & -domain
            domain ^= low
            image[idx] = low.bit_length() - 1
            yield from rec(idx + 1)

    yield from rec(0)


def sub_count(f: Graph | RootedGraph, g: Graph | RootedGraph) -> int:
    """Number of subgraphs of g isomorphic to f (root-respecting for rooted inputs)."""
    rf = as_rooted(f)
    inj = inj_hom_count(rf, g)
    if inj == 0:
        return 0
    aut = automorphism_count(rf)
    assert inj % aut == 0
    return inj // aut


def sub_count_direct(f: Graph | RootedGraph, g: Graph | RootedGraph) -> int:
    """Oracle: count distinct subgraph copies by deduplicating injective images."""
    rf, rg = as_rooted(f), as_rooted(g)
    images = set()
    for mapping in enumerate_homs(rf, rg):
        if len(set(mapping)) != rf.graph.n:
            continue
        edges = frozenset((min(mapping[u], mapping[v]), max(mapping[u], mapping[v]))
                          for u, v in rf.graph.edges)
        images.add((frozenset(mapping), edges))
    return len(images)


def hom_vector(fs: list[Graph | RootedGraph], g: Graph | RootedGraph) -> list[int]:
    return [hom_count(f, g) for f in fs]
