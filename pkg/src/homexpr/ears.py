"""Nested ear decompositions: validation and exhaustive search.

An ear is a simple path (>= 1 edge, all vertices distinct); the ears
partition the edge set.  The first c ears (c = number of connected
components) are pairwise disjoint roots; every later ear nests on an earlier
one: either both endpoints lie on a single earlier ear (its *interval* is the
subpath between them) or exactly one does (empty interval), and all other
vertices of the ear are fresh.  Intervals of two ears overlap only when the
earlier is contained in the later.

Variants restrict same-parent siblings: endpoint-shared (all ears with
nonempty interval share an endpoint), strong (sibling intervals form a chain
in placement order), almost-strong (only intervals with more than one edge
must chain).

The searcher is exhaustive backtracking with a failed-state memo keyed on the
(order-normalized) set of placed ears; sibling orderings are normalized, so
equal ear sets are interchangeable.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Optional, Sequence

from .errors import DomainError, ResourceLimitError
from .graphs import Graph, connected_components, induced_subgraph
from .limits import LIMITS, Limits


class NedVariant(str, Enum):
    GENERAL = "general"
    STRONG = "strong"
    ALMOST_STRONG = "almost-strong"
    ENDPOINT_SHARED = "endpoint-shared"

    @classmethod
    def parse(cls, name: str) -> "NedVariant":
        for member in cls:
            if member.value == name.lower():
                return member
        raise ValueError(f"unknown NED variant {name!r}")


@dataclass(frozen=True)
class Ear:
    seq: tuple[int, ...]
    parent: Optional[int]
    interval: Optional[tuple[int, int]]  # edge positions [lo, hi) on the parent's seq

    def edges(self) -> frozenset[tuple[int, int]]:
        return frozenset(
            (min(a, b), max(a, b)) for a, b in zip(self.seq, self.seq[1:])
        )

    def endpoints(self) -> tuple[int, int]:
        return self.seq[0], self.seq[-1]


@dataclass(frozen=True)
class EarDecomposition:
    ears: tuple[Ear, ...]


def _interval_edges(parent: Ear, interval: tuple[int, int]) -> frozenset[tuple[int, int]]:
    lo, hi = interval
    seq = parent.seq
    return frozenset((min(seq[i], seq[i + 1]), max(seq[i], seq[i + 1])) for i in range(lo, hi))


def explain_ned(g: Graph, d: EarDecomposition, variant: NedVariant) -> Optional[str]:
    """None if valid, else a description of the first violated clause."""
    ears = d.ears
    if g.m == 0:
        return None if not ears else "edgeless graph admits only the empty decomposition"
    if not ears:
        return "no ears but graph has edges"
    # isolated vertices need no ear; c counts components that carry edges
    c = sum(1 for comp in connected_components(g) if any(e[0] in comp for e in g.edges))
    covered: set[tuple[int, int]] = set()
    for j, ear in enumerate(ears):
        seq = ear.seq
        if len(seq) < 2:
            return f"ear {j} is not a path with at least one edge"
        if len(set(seq)) != len(seq):
            return f"ear {j} repeats a vertex (not a simple path)"
        for a, b in zip(seq, seq[1:]):
            if not g.has_edge(a, b):
                return f"ear {j} uses non-edge ({a},{b})"
        es = ear.edges()
        if covered & es:
            return f"ear {j} reuses an edge of an earlier ear"
        covered |= es
    if covered != set(g.edges):
        return "ears do not cover every edge"
    for i in range(min(c, len(ears))):
        if ears[i].parent is not None:
            return f"ear {i} is a component root but declares a parent"
        for j in range(i):
            if set(ears[i].seq) & set(ears[j].seq):
                return f"root ears {j} and {i} intersect"
    if len(ears) < c:
        return "fewer ears than connected components"
    vertex_sets = [set(e.seq) for e in ears]
    for j in range(c, len(ears)):
        ear = ears[j]
        if ear.parent is None or not 0 <= ear.parent < j:
            return f"ear {j} must nest on an earlier ear"
        parent = ears[ear.parent]
        x, y = ear.endpoints()
        in_parent = [v for v in (x, y) if v in vertex_sets[ear.parent]]
        if not in_parent:
            return f"ear {j} has no endpoint on its parent"
        if len(set(in_parent)) == 2:
            p, q = parent.seq.index(x), parent.seq.index(y)
            lo, hi = min(p, q), max(p, q)
            if ear.interval != (lo, hi):
                return f"ear {j} interval must be the parent subpath ({lo},{hi})"
            exempt = {x, y}
        else:
            if ear.interval is not None:
                return f"ear {j} has one endpoint on the parent, interval must be empty"
            exempt = {in_parent[0]}
        for v in ear.seq:
            if v in exempt:
                continue
            for k in range(j):
                if v in vertex_sets[k]:
                    return f"vertex {v} of ear {j} already lies on ear {k}"
    intervals = [
        _interval_edges(ears[e.parent], e.interval) if e.interval is not None else frozenset()
        for e in ears
    ]
    for j in range(c, len(ears)):
        for k in range(j + 1, len(ears)):
            ij, ik = intervals[j], intervals[k]
            if ij & ik and not ij <= ik:
                return f"intervals of ears {j} and {k} overlap without containment"
    if variant is NedVariant.ENDPOINT_SHARED:
        shared: Optional[set[int]] = None
        for j, ear in enumerate(ears):
            if ear.interval is not None:
                pts = set(ear.endpoints())
                shared = pts if shared is None else shared & pts
                if not shared:
                    return "ears with nonempty intervals share no endpoint"
    elif variant in (NedVariant.STRONG, NedVariant.ALMOST_STRONG):
        for j in range(c, len(ears)):
            for k in range(j + 1, len(ears)):
                if ears[j].parent != ears[k].parent:
                    continue
                if variant is NedVariant.STRONG or len(intervals[j]) > 1:
                    if not intervals[j] <= intervals[k]:
                        return f"sibling intervals of ears {j} and {k} violate {variant.value}"
    return None


def validate_ned(g: Graph, d: EarDecomposition, variant: NedVariant) -> bool:
    return explain_ned(g, d, variant) is None


# ---------------------------------------------------------------------------
# Search.


def _simple_paths_from(
    g: Graph,
    start: int,
    remaining: frozenset,
    fresh_only: set[int],
    end_at: Optional[int],
) -> Iterator[tuple[int, ...]]:
    """Simple paths from start whose edges lie in remaining.

    Interior vertices (and the far endpoint, when end_at is None) must avoid
    ``fresh_only`` (the set of already-used vertices).  With ``end_at`` given,
    paths must finish there and interior vertices stay fresh.
    """

    path = [start]
    on_path = {start}

    def rec(v: int) -> Iterator[tuple[int, ...]]:
        for w in sorted(g.neighbors(v)):
            e = (min(v, w), max(v, w))
            if e not in remaining or w in on_path:
                continue
            if end_at is not None:
                if w == end_at:
                    yield tuple(path) + (w,)
                    continue
                if w in fresh_only:
                    continue
            else:
                if w in fresh_only:
                    continue
            path.append(w)
            on_path.add(w)
            if end_at is None:
                yield tuple(path)
            yield from rec(w)
            on_path.discard(w)
            path.pop()

    yield from rec(start)


@dataclass
class _PlacedEar:
    seq: tuple[int, ...]
    parent: Optional[int]
    interval: Optional[tuple[int, int]]
    interval_edges: frozenset


class _NedSearch:
    def __init__(self, g: Graph, variant: NedVariant, budget: int):
        self.g = g
        self.variant = variant
        self.budget = budget
        self.nodes = 0
        self.failed: set[frozenset] = set()

    def _digest(self, ears: list[_PlacedEar]) -> frozenset:
        def norm(seq: tuple[int, ...]) -> tuple[int, ...]:
            return min(seq, tuple(reversed(seq)))

        items = []
        for e in ears:
            parent_seq = norm(ears[e.parent].seq) if e.parent is not None else None
            items.append((norm(e.seq), parent_seq, e.interval_edges))
        return frozenset(items)

    def _spend(self) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise ResourceLimitError("NED search budget exceeded")

    def _variant_ok(self, ears: list[_PlacedEar], parent: int, new_edges: frozenset,
                    endpoints: tuple[int, int], shared: Optional[frozenset]):
        """Sibling/interval rules for a prospective child.

        Returns (True, updated shared-endpoint candidates) or (False, None).
        ``shared`` is None while no nonempty-interval ear exists yet.
        """
        for s in ears:
            if s.parent != parent:
                continue
            if s.interval_edges & new_edges and not s.interval_edges <= new_edges:
                return False, None
            if self.variant is NedVariant.STRONG and not s.interval_edges <= new_edges:
                return False, None
            if (
                self.variant is NedVariant.ALMOST_STRONG
                and len(s.interval_edges) > 1
                and not s.interval_edges <= new_edges
            ):
                return False, None
        if self.variant is NedVariant.ENDPOINT_SHARED and new_edges:
            pts = frozenset(endpoints)
            shared = pts if shared is None else shared & pts
            if not shared:
                return False, None
        return True, shared

    def search(
        self,
        first_constraint: Optional[Sequence[int]],
        shared_seed: Optional[frozenset] = None,
    ) -> Optional[list[_PlacedEar]]:
        g = self.g
        all_edges = frozenset(g.edges)
        if not all_edges:
            return []
        first_candidates: list[tuple[int, ...]] = []
        if first_constraint is None:
            for u in range(g.n):
                for seq in _simple_paths_from(g, u, all_edges, set(), None):
                    if seq[0] < seq[-1]:  # each ear once, not its reversal
                        first_candidates.append(seq)
        elif len(first_constraint) == 1:
            w = first_constraint[0]
            first_candidates = list(_simple_paths_from(g, w, all_edges, set(), None))
        else:
            w, x = first_constraint
            if w == x:
                raise DomainError("first-ear endpoints must be distinct")
            first_candidates = list(_simple_paths_from(g, w, all_edges, set(), x))
        first_candidates.sort(key=len, reverse=True)
        for seq in first_candidates:
            first = _PlacedEar(seq, None, None, frozenset())
            used = set(seq)
            remaining = all_edges - frozenset(
                (min(a, b), max(a, b)) for a, b in zip(seq, seq[1:])
            )
            shared0 = shared_seed if self.variant is NedVariant.ENDPOINT_SHARED else frozenset()
            out = self._extend([first], used, remaining, shared0)
            if out is not None:
                return out
        return None

    def _extend(
        self,
        ears: list[_PlacedEar],
        used: set[int],
        remaining: frozenset,
        shared: Optional[frozenset],
    ) -> Optional[list[_PlacedEar]]:
        if not remaining:
            return list(ears)
        self._spend()
        digest = (self._digest(ears), shared)
        if digest in self.failed:
            return None
        g = self.g
        # dead test: an edge with both endpoints used must be coverable as a
        # one-edge ear nested on a single existing ear
        for a, b in remaining:
            if a in used and b in used:
                if not any(a in e.seq and b in e.seq for e in ears):
                    self.failed.add(digest)
                    return None
        for parent_idx, parent in enumerate(ears):
            seq = parent.seq
            npos = len(seq)
            # both endpoints on this parent
            for p in range(npos):
                for q in range(p + 1, npos):
                    x, y = seq[p], seq[q]
                    new_edges = _interval_edges(parent, (p, q))
                    ok, new_shared = self._variant_ok(ears, parent_idx, new_edges, (x, y), shared)
                    if not ok:
                        continue
                    for cand in _simple_paths_from(g, x, remaining, used, y):
                        out = self._place(ears, used, remaining, parent_idx, cand,
                                          (p, q), new_edges, new_shared)
                        if out is not None:
                            return out
            # one endpoint on this parent, rest fresh
            for p in range(npos):
                x = seq[p]
                ok, new_shared = self._variant_ok(ears, parent_idx, frozenset(), (x, x), shared)
                if not ok:
                    continue
                for cand in _simple_paths_from(g, x, remaining, used, None):
                    out = self._place(ears, used, remaining, parent_idx, cand,
                                      None, frozenset(), new_shared)
                    if out is not None:
                        return out
        self.failed.add(digest)
        return None

    def _place(self, ears, used, remaining, parent_idx, seq, interval, interval_edges, shared):
        new = _PlacedEar(tuple(seq), parent_idx, interval, interval_edges)
        new_used = used | set(seq)
        new_remaining = remaining - frozenset(
            (min(a, b), max(a, b)) for a, b in zip(seq, seq[1:])
        )
        return self._extend(ears + [new], new_used, new_remaining, shared)


def find_ned(
    g: Graph,
    variant: NedVariant,
    first_ear_endpoints: Optional[Sequence[int]] = None,
    limits: Limits = LIMITS,
) -> Optional[EarDecomposition]:
    """Search for a NED of the requested variant; None when none exists.

    ``first_ear_endpoints`` constrains the first ear of a *connected* graph:
    one vertex (must be an endpoint) or two (must be the two endpoints).
    """
    comps = sorted(connected_components(g), key=min)
    if first_ear_endpoints is not None and len(comps) > 1:
        raise DomainError("first-ear constraints require a connected graph")
    seeds: list[Optional[frozenset]] = [None] * len(comps)
    if variant is NedVariant.ENDPOINT_SHARED and len(comps) > 1:
        # the shared endpoint is global: at most one component may use
        # nonempty intervals (every other component must be a tree)
        subs = [induced_subgraph(g, sorted(comp))[0] for comp in comps]
        nontree = [i for i, sub in enumerate(subs) if sub.m >= sub.n]
        if len(nontree) > 1:
            return None
        if nontree:
            i = nontree[0]
            for w in range(subs[i].n):
                seeds_try = list(seeds)
                seeds_try[i] = frozenset({w})
                out = _find_ned_components(g, comps, variant, seeds_try, limits)
                if out is not None:
                    return out
            return None
        return _find_ned_components(g, comps, variant, seeds, limits)
    return _find_ned_components(g, comps, variant, seeds, limits, first_ear_endpoints)


def _find_ned_components(
    g: Graph,
    comps: list[set[int]],
    variant: NedVariant,
    seeds: list[Optional[frozenset]],
    limits: Limits,
    first_ear_endpoints: Optional[Sequence[int]] = None,
) -> Optional[EarDecomposition]:
    comp_results = []
    for ci, comp in enumerate(comps):
        sub, index = induced_subgraph(g, sorted(comp))
        back = {i: v for v, i in index.items()}
        constraint = None
        if first_ear_endpoints is not None:
            constraint = [index[v] for v in first_ear_endpoints]
        searcher = _NedSearch(sub, variant, limits.ned_search_budget)
        placed = searcher.search(constraint, seeds[ci])  # seeds use local ids
        if placed is None:
            return None
        comp_results.append([(tuple(back[v] for v in e.seq), e.parent, e.interval) for e in placed])
    # assemble: the component root ears first (pairwise disjoint), then the
    # nested ears of each component with parent indices remapped
    comp_results = [placed for placed in comp_results if placed]
    c = len(comp_results)
    index_map: dict[tuple[int, int], int] = {}
    for ci in range(c):
        index_map[(ci, 0)] = ci
    next_idx = c
    for ci, placed in enumerate(comp_results):
        for li in range(1, len(placed)):
            index_map[(ci, li)] = next_idx
            next_idx += 1
    slots: list[Optional[Ear]] = [None] * next_idx
    for ci, placed in enumerate(comp_results):
        for li, (seq, parent, interval) in enumerate(placed):
            gparent = index_map[(ci, parent)] if parent is not None else None
            slots[index_map[(ci, li)]] = Ear(seq, gparent, interval)
    return EarDecomposition(tuple(e for e in slots if e is not None))


# ---------------------------------------------------------------------------
# Line-oriented certificate format: one line per ear,
#   ear <i> parent <p|-> interval <a>..<b>|- : v0 v1 ... vk


def serialize_ears(d: EarDecomposition) -> str:
    lines = []
    for i, ear in enumerate(d.ears):
        parent = "-" if ear.parent is None else str(ear.parent)
        interval = "-" if ear.interval is None else f"{ear.interval[0]}..{ear.interval[1]}"
        verts = " ".join(str(v) for v in ear.seq)
        lines.append(f"ear {i} parent {parent} interval {interval} : {verts}")
    return "\n".join(lines) + ("\n" if lines else "")


def parse_ears(text: str) -> EarDecomposition:
    ears = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, _, tail = line.partition(":")
        parts = head.split()
        if len(parts) != 6 or parts[0] != "ear" or parts[2] != "parent" or parts[4] != "interval":
            raise DomainError(f"bad ear line {line!r}")
        parent = None if parts[3] == "-" else int(parts[3])
        if parts[5] == "-":
            interval = None
        else:
            lo, _, hi = parts[5].partition("..")
            interval = (int(lo), int(hi))
        seq = tuple(int(v) for v in tail.split())
        ears.append(Ear(seq, parent, interval))
    return EarDecomposition(tuple(ears))
