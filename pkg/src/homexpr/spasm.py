"""Spasm enumeration, subgraph-counting coefficients, and countability.

The spasm of F is the set of quotients of F by vertex partitions whose
classes are independent sets (and label-homogeneous); roots map through the
quotient.  Coefficients alpha with  sub(F,.) = sum alpha(F,Ftilde) hom(Ftilde,.)
come from inverting the triangular surjective-homomorphism matrix over the
spasm, ordered by decreasing vertex count; they are exact rationals, all
nonzero, and every basis is verified against direct subgraph counts on random
targets before it is returned.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from .canon import CanonicalForm, automorphism_count, canonical_form
from .errors import InternalConsistencyError, ResourceLimitError
from .graphs import Graph, RootedGraph, as_rooted, to_graph6
from .homcount import enumerate_homs, hom_count, sub_count
from .limits import LIMITS, Limits
from .families import FamilyId, in_family, in_family_rooted


@dataclass(frozen=True)
class SpasmBasis:
    source: RootedGraph
    entries: tuple[tuple[RootedGraph, Fraction], ...]

    def to_json_dict(self) -> dict:
        return {
            "pattern": to_graph6(self.source.graph),
            "pattern_roots": list(self.source.roots),
            "entries": [
                {
                    "image": to_graph6(image.graph),
                    "roots": list(image.roots),
                    "alpha": f"{alpha.numerator}/{alpha.denominator}",
                }
                for image, alpha in self.entries
            ],
        }


def _quotient(rf: RootedGraph, classes: list[list[int]]) -> RootedGraph:
    g = rf.graph
    cls_of = {}
    for i, cls in enumerate(classes):
        for v in cls:
            cls_of[v] = i
    edges = {(min(cls_of[u], cls_of[v]), max(cls_of[u], cls_of[v])) for u, v in g.edges}
    labels = [g.labels[cls[0]] for cls in classes]
    q = Graph(len(classes), edges, labels)
    return RootedGraph(q, tuple(cls_of[r] for r in rf.roots))


def _independent_partitions(g: Graph) -> Iterator[list[list[int]]]:
    """Partitions of V with no class containing adjacent or unequal-label vertices."""
    n = g.n
    classes: list[list[int]] = []
    masks: list[int] = []  # union of adjacency over the class

    def rec(v: int) -> Iterator[list[list[int]]]:
        if v == n:
            yield [list(c) for c in classes]
            return
        for i, cls in enumerate(classes):
            if masks[i] >> v & 1:
                continue
            if g.labels[cls[0]] != g.labels[v]:
                continue
            cls.append(v)
            saved = masks[i]
            masks[i] |= g.adj[v]
            yield from rec(v + 1)
            cls.pop()
            masks[i] = saved
        classes.append([v])
        masks.append(g.adj[v])
        yield from rec(v + 1)
        classes.pop()
        masks.pop()

    yield from rec(0)


def _mask_union(g: Graph, cls: list[int]) -> int:
    m = 0
    for u in cls:
        m |= g.adj[u]
    return m


def iter_spasm(f: Graph | RootedGraph, limits: Limits = LIMITS) -> Iterator[RootedGraph]:
    """Lazily yield one representative per isomorphism class of images of f.

    Quotients are pre-deduplicated on their raw indexed form (cheap, catches
    the symmetric bulk) and then on canonical form.
    """
    rf = as_rooted(f)
    if rf.graph.n > limits.max_spasm_vertices:
        raise ResourceLimitError(
            f"spasm limited to {limits.max_spasm_vertices} vertices, got {rf.graph.n}"
        )
    raw_seen: set = set()
    seen: set[CanonicalForm] = set()
    for classes in _independent_partitions(rf.graph):
        q = _quotient(rf, classes)
        raw = (q.graph.n, q.graph.edges, q.graph.labels, q.roots)
        if raw in raw_seen:
            continue
        raw_seen.add(raw)
        key = canonical_form(q)
        if key not in seen:
            seen.add(key)
            yield q


class LazyImages:
    """Progressively materialized spasm; each iteration replays the prefix."""

    def __init__(self, f: Graph | RootedGraph, limits: Limits = LIMITS):
        self._gen = iter_spasm(f, limits)
        self._items: list[RootedGraph] = []
        self._done = False

    def __iter__(self) -> Iterator[RootedGraph]:
        i = 0
        while True:
            while i < len(self._items):
                yield self._items[i]
                i += 1
            if self._done:
                return
            try:
                self._items.append(next(self._gen))
            except StopIteration:
                self._done = True


def enumerate_spasm(
    f: Graph | RootedGraph, limits: Limits = LIMITS
) -> list[RootedGraph]:
    """One representative per isomorphism class of homomorphic images of f."""
    images = list(iter_spasm(f, limits))
    images.sort(key=lambda q: canonical_form(q).data)
    return images


def surjective_hom_count(f: Graph | RootedGraph, image: Graph | RootedGraph) -> int:
    """Homomorphisms f -> image surjective on both vertices and edges."""
    rf, ri = as_rooted(f), as_rooted(image)
    gi = ri.graph
    target_edges = gi.edges
    count = 0
    for mapping in enumerate_homs(rf, ri):
        if len(set(mapping)) != gi.n:
            continue
        hit = {(min(mapping[u], mapping[v]), max(mapping[u], mapping[v]))
               for u, v in rf.graph.edges}
        if hit == target_edges:
            count += 1
    return count


def _random_targets(seed: int, count: int, max_n: int = 7) -> list[Graph]:
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(1, max_n)
        p = rng.uniform(0.2, 0.8)
        edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
        out.append(Graph(n, edges))
    return out


def spasm_coefficients(f: Graph | RootedGraph, limits: Limits = LIMITS) -> SpasmBasis:
    """Exact rational coefficients over Spasm(f), verified before returning."""
    rf = as_rooted(f)
    images = enumerate_spasm(rf, limits)
    # order by decreasing vertex count (ties: decreasing edges, then canonical
    # form) -> the surj matrix is upper triangular with aut on the diagonal
    images.sort(key=lambda r: (-r.graph.n, -r.graph.m, canonical_form(r).data))
    assert images and images[0].graph.n == rf.graph.n
    k = len(images)
    surj = [[0] * k for _ in range(k)]
    for i in range(k):
        for j in range(k):
            if images[j].graph.n > images[i].graph.n or (
                images[j].graph.n == images[i].graph.n and i != j
            ):
                continue
            surj[i][j] = (
                automorphism_count(images[i])
                if i == j
                else surjective_hom_count(images[i], images[j])
            )
    # alpha solves alpha^T . surj = e_0^T (row of the inverse for the pattern)
    alpha = [Fraction(0)] * k
    for j in range(k):
        val = Fraction(1 if j == 0 else 0)
        for i in range(j):
            val -= alpha[i] * surj[i][j]
        alpha[j] = val / surj[j][j]
    entries = tuple((images[j], alpha[j]) for j in range(k))
    for _, a in entries:
        if a == 0:
            raise InternalConsistencyError("spasm coefficient vanished; inversion bug")
    # verification against direct subgraph counting on random targets
    seed = int.from_bytes(canonical_form(rf).data[-8:], "little", signed=False)
    roots = len(rf.roots)
    rng = random.Random(seed)
    for target in _random_targets(seed, 20):
        if target.n == 0:
            continue
        marked = RootedGraph(target, tuple(rng.randrange(target.n) for _ in range(roots)))
        via_basis = sum(a * hom_count(img, marked) for img, a in entries)
        direct = sub_count(rf, marked)
        if via_basis != direct:
            raise InternalConsistencyError(
                f"spasm basis disagrees with sub_count on a random target "
                f"({via_basis} != {direct})"
            )
    return SpasmBasis(rf, entries)


def sub_count_via_basis(basis: SpasmBasis, target: Graph | RootedGraph) -> int:
    rt = as_rooted(target)
    total = sum(a * hom_count(img, rt) for img, a in basis.entries)
    assert total.denominator == 1
    return int(total)


def subgraph_countable(
    f: Graph | RootedGraph,
    family: FamilyId,
    level: str = "graph",
    limits: Limits = LIMITS,
    images: Optional[list[RootedGraph]] = None,
) -> tuple[bool, Optional[RootedGraph]]:
    """Thm-style verdict: countable iff every spasm image is in the family.

    Returns (verdict, witness) where the witness is an image outside the
    family when the verdict is negative.
    """
    rf = as_rooted(f)
    expected_roots = {"graph": 0, "node": 1, "edge": 2}[level]
    if len(rf.roots) != expected_roots:
        raise ValueError(f"{level} level expects {expected_roots} roots")
    if images is None:
        images = enumerate_spasm(rf, limits)
    for image in images:
        if level == "graph":
            member = in_family(image.graph, family, limits)
        else:
            member = in_family_rooted(image, family, level, limits)
        if not member:
            return False, image
    return True, None
