"""Fürer gadget graphs, twists, and counterexample pairs.

G(F) has a vertex (x, X) for every base vertex x and even subset X of its
neighborhood; (x,X) ~ (y,Y) iff {x,y} is a base edge and x in Y <-> y in X.
Twisting a base edge complements the bipartite block between the two meta
sets; an odd number of twists breaks isomorphism while keeping the refinement
colors of every model that cannot decompose the base graph.

Counterexample pairs: at graph level (G(F1), one-twist) built on the
component with the most edges, disjoint-unioned with the untouched remaining
components; at node/edge level the 4-clique-augmented construction with a
candidate search over meta vertices, all candidates checked in one joint
refinement session.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

from .errors import DomainError
from .graphs import Graph, RootedGraph, as_rooted, connected_components, disjoint_union, induced_subgraph, is_connected, to_graph6
from .homcount import hom_count, sub_count
from .families import FamilyId, in_family, in_family_rooted
from .limits import LIMITS, Limits
from .refinement import ModelId, PAIR_MODELS, refine


@dataclass(frozen=True)
class FurerGraph:
    graph: Graph
    base: Graph
    meta: tuple[tuple[int, ...], ...]  # base vertex -> product vertex ids
    subsets: tuple[frozenset[int], ...]  # product vertex id -> its subset

    def meta_vertex(self, x: int, subset: frozenset[int]) -> int:
        for pid in self.meta[x]:
            if self.subsets[pid] == subset:
                return pid
        raise KeyError((x, subset))


def _even_subsets(neighbors: list[int]) -> list[frozenset[int]]:
    out = []
    for size in range(0, len(neighbors) + 1, 2):
        out.extend(frozenset(c) for c in combinations(neighbors, size))
    return out


def furer_graph(f: Graph) -> FurerGraph:
    """The Fürer graph of a connected base graph."""
    if not is_connected(f) or f.n == 0:
        raise DomainError("Fürer construction needs a connected nonempty base graph")
    vertices: list[tuple[int, frozenset[int]]] = []
    meta: list[list[int]] = [[] for _ in range(f.n)]
    for x in range(f.n):
        for X in sorted(_even_subsets(f.neighbors(x)), key=sorted):
            meta[x].append(len(vertices))
            vertices.append((x, X))
    index = {vx: i for i, vx in enumerate(vertices)}
    edges = []
    for x, y in f.edges:
        for X in _even_subsets(f.neighbors(x)):
            for Y in _even_subsets(f.neighbors(y)):
                if (x in Y) == (y in X):
                    edges.append((index[(x, X)], index[(y, Y)]))
    labels = [f.labels[x] for x, _ in vertices]
    return FurerGraph(
        Graph(len(vertices), edges, labels),
        f,
        tuple(tuple(m) for m in meta),
        tuple(X for _, X in vertices),
    )


def twist(fg: FurerGraph, twisted_edges: Sequence[tuple[int, int]]) -> Graph:
    """Complement the meta bipartite block of each listed base edge."""
    base_edges = fg.base.edges
    edges = set(fg.graph.edges)
    for u, v in twisted_edges:
        e = (min(u, v), max(u, v))
        if e not in base_edges:
            raise DomainError(f"({u},{v}) is not an edge of the base graph")
        block = {
            (min(a, b), max(a, b))
            for a in fg.meta[e[0]]
            for b in fg.meta[e[1]]
        }
        edges = edges ^ block
    return Graph(fg.graph.n, edges, fg.graph.labels)


_MODEL_OF_FAMILY = {"MP": ModelId.MP, "Sub": ModelId.SUB, "L": ModelId.L, "LF": ModelId.LF, "F": ModelId.F}


def model_of_family(family: FamilyId) -> ModelId:
    if family.order is not None:
        raise DomainError("refinement is implemented for the base models only")
    return _MODEL_OF_FAMILY[family.kind]


def clique_augmented_pair(
    f: Graph | RootedGraph, k: int = 4, model: Optional[ModelId] = None
) -> tuple[Graph, Graph, tuple[int, ...], tuple[int, ...]]:
    """Fürer pair of F union K_k through the roots, with marked meta tuples.

    Returns (G, H, marks_in_G, marks_in_H): marks_in_G are the (w_i, {})
    vertices; marks_in_H are (w_i, U_i) candidates with U_i inside the base
    graph, found by a joint refinement session when a model is given (for
    m = |roots| = 1 node colors must match, for m = 2 pair colors must).
    """
    rf = as_rooted(f)
    m = len(rf.roots)
    if not 1 <= m <= 2 or k < max(2, m):
        raise DomainError("clique augmentation needs 1 or 2 roots and k >= 2")
    base = rf.graph
    if not is_connected(base):
        raise DomainError("node/edge-level counterexamples need a connected base")
    # F~ = F plus a k-clique through the roots (fresh vertices added)
    fresh = [base.n + i for i in range(k - m)]
    clique = list(dict.fromkeys(list(rf.roots) + fresh))
    edges = set(base.edges)
    for a, b in combinations(clique, 2):
        edges.add((min(a, b), max(a, b)))
    aug = Graph(base.n + len(fresh), edges, list(base.labels) + [0] * len(fresh))
    fg = furer_graph(aug)
    first_edge = min(aug.edges)
    h = twist(fg, [first_edge])
    marks_g = tuple(fg.meta_vertex(w, frozenset()) for w in rf.roots)
    if model is None:
        return fg.graph, h, marks_g, marks_g
    marks_h = _search_meta_marks(fg, h, rf, model)
    if marks_h is None:
        raise DomainError(
            "no meta candidate matches; is the rooted pattern outside the family?"
        )
    return fg.graph, h, marks_g, marks_h


def _search_meta_marks(
    fg: FurerGraph, h: Graph, rf: RootedGraph, model: ModelId
) -> Optional[tuple[int, ...]]:
    base = rf.graph
    session = refine(model, [fg.graph, h])
    marks_g = tuple(fg.meta_vertex(w, frozenset()) for w in rf.roots)
    candidate_sets = []
    for w in rf.roots:
        inside = [v for v in base.neighbors(w)]
        candidate_sets.append(
            [fg.meta_vertex(w, frozenset(c))
             for size in range(0, len(inside) + 1, 2)
             for c in combinations(inside, size)]
        )
    if len(rf.roots) == 1:
        want = session.node_colors[(0, marks_g[0])]
        for cand in candidate_sets[0]:
            if session.node_colors[(1, cand)] == want:
                return (cand,)
        return None
    want = session.unit_colors[(0, marks_g)]
    for c1 in candidate_sets[0]:
        for c2 in candidate_sets[1]:
            if session.unit_colors[(1, (c1, c2))] == want:
                return (c1, c2)
    return None


def build_counterexample(
    f: Graph | RootedGraph,
    family: FamilyId,
    level: str = "graph",
    limits: Limits = LIMITS,
) -> tuple[Graph, Graph, tuple[int, ...], tuple[int, ...]]:
    """A pair (G, H) with equal model representations but different hom counts
    of f; defined exactly for patterns outside the family at the given level."""
    rf = as_rooted(f)
    model = model_of_family(family)
    if level == "graph":
        if len(rf.roots) != 0:
            raise DomainError("graph level takes unrooted patterns")
        if in_family(rf.graph, family, limits):
            raise DomainError(f"{to_graph6(rf.graph)} is in {family}; no counterexample exists")
        comps = [induced_subgraph(rf.graph, sorted(c))[0] for c in connected_components(rf.graph)]
        comps.sort(key=lambda c: (-c.m, -c.n))
        head, rest = comps[0], comps[1:]
        fg = furer_graph(head)
        g_side = fg.graph
        h_side = twist(fg, [min(head.edges)])
        for other in rest:
            g_side = disjoint_union(g_side, other)
            h_side = disjoint_union(h_side, other)
        return g_side, h_side, (), ()
    if level in ("node", "edge"):
        if in_family_rooted(rf, family, level, limits):
            raise DomainError(f"rooted pattern is in {family} at {level} level")
        return clique_augmented_pair(rf, k=4, model=model)
    raise DomainError(f"unknown level {level!r}")


def verify_counterexample(
    f: Graph | RootedGraph,
    family: FamilyId,
    level: str,
    pair: tuple[Graph, Graph, tuple[int, ...], tuple[int, ...]],
    include_sub: bool = False,
) -> dict:
    """Report whether the pair certifies non-membership: representations equal
    under the model while hom counts of f differ."""
    rf = as_rooted(f)
    model = model_of_family(family)
    g_side, h_side, marks_g, marks_h = pair
    session = refine(model, [g_side, h_side])
    if level == "graph":
        repr_equal = session.graph_colors[0] == session.graph_colors[1]
    elif level == "node":
        repr_equal = session.node_colors[(0, marks_g[0])] == session.node_colors[(1, marks_h[0])]
    else:
        repr_equal = session.unit_colors[(0, marks_g)] == session.unit_colors[(1, marks_h)]
    hom_g = hom_count(rf, RootedGraph(g_side, marks_g))
    hom_h = hom_count(rf, RootedGraph(h_side, marks_h))
    report = {
        "family": str(family),
        "level": level,
        "repr_equal": repr_equal,
        "hom_g": hom_g,
        "hom_h": hom_h,
        "verdict": bool(repr_equal and hom_g != hom_h),
    }
    if include_sub:
        report["sub_g"] = sub_count(rf, RootedGraph(g_side, marks_g))
        report["sub_h"] = sub_count(rf, RootedGraph(h_side, marks_h))
    return report
