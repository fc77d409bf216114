"""Pebble-game deciders and canonical tree decompositions.

The game on a connected graph: Alice moves two pebbles per the model's rule;
Bob maintains one selected edge component (relative to the pebbled vertices)
that shrinks or survives moves per the parity rules.  Alice wins when a
selected component becomes a single edge with both endpoints pebbled; the win
condition is checked after every operation, including the mid-move instant
when three pebbles are down.  A state is winning iff some legal move makes
every Bob response winning; the search restricts moves so that every
non-terminal successor component is a strict subset of the current one, which
keeps the recursion well-founded without changing the answer.

Move sets (pebbles a, b; pinned pebble never moves for Sub):

* Sub -- teleport the free pebble; walk the free pebble to a neighbor.
* L   -- teleport either pebble; walk either pebble to a neighbor of itself.
* LF  -- teleport either pebble; place a third pebble on a neighbor of a or b
         and then vacate either pebble, chosen after Bob responds.
* F   -- place a third pebble anywhere, vacate either pebble adaptively.

Winning strategies reconstruct into width-2 canonical tree decompositions:
even nodes carry the pebble pair as a 2-multiset, odd nodes add the placed
vertex, one even child per successor pebble pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import DomainError, ResourceLimitError
from .families import FamilyId
from .graphs import Graph, connected_components, is_connected

Edge = tuple[int, int]


def edge_components(g: Graph, separators: Iterable[int]) -> list[frozenset[Edge]]:
    """Partition of E: two edges share a class iff joined by a path whose
    interior avoids the separators."""
    seps = set(separators)
    parent: dict[Edge, Edge] = {e: e for e in g.edges}

    def find(e: Edge) -> Edge:
        while parent[e] != e:
            parent[e] = parent[parent[e]]
            e = parent[e]
        return e

    def union(a: Edge, b: Edge) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    incident: dict[int, list[Edge]] = {}
    for e in g.edges:
        incident.setdefault(e[0], []).append(e)
        incident.setdefault(e[1], []).append(e)
    for v, edges in incident.items():
        if v in seps or len(edges) < 2:
            continue
        first = edges[0]
        for other in edges[1:]:
            union(first, other)
    groups: dict[Edge, set[Edge]] = {}
    for e in g.edges:
        groups.setdefault(find(e), set()).add(e)
    return sorted((frozenset(s) for s in groups.values()), key=sorted)


@dataclass(frozen=True)
class TreeDecomposition:
    """Rooted tree of bags; node 0 is the root; bags are sorted multisets."""

    parents: tuple[Optional[int], ...]
    bags: tuple[tuple[int, ...], ...]

    def depth(self, node: int) -> int:
        d = 0
        while self.parents[node] is not None:
            node = self.parents[node]
            d += 1
        return d

    def children(self, node: int) -> list[int]:
        return [i for i, p in enumerate(self.parents) if p == node]


def serialize_td(td: TreeDecomposition) -> str:
    lines = []
    for i, bag in enumerate(td.bags):
        parent = "-" if td.parents[i] is None else str(td.parents[i])
        lines.append(f"bag {i} parent {parent} : " + " ".join(str(v) for v in bag))
    return "\n".join(lines) + ("\n" if lines else "")


def parse_td(text: str) -> TreeDecomposition:
    parents: list[Optional[int]] = []
    bags: list[tuple[int, ...]] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, _, tail = line.partition(":")
        parts = head.split()
        if len(parts) != 4 or parts[0] != "bag" or parts[2] != "parent":
            raise DomainError(f"bad bag line {line!r}")
        if int(parts[1]) != len(bags):
            raise DomainError("bag lines must be numbered consecutively from 0")
        parents.append(None if parts[3] == "-" else int(parts[3]))
        bags.append(tuple(sorted(int(v) for v in tail.split())))
    return TreeDecomposition(tuple(parents), tuple(bags))


# ---------------------------------------------------------------------------
# Validation.


def _multiset_leq(small: Sequence[int], big: Sequence[int]) -> bool:
    from collections import Counter

    cs, cb = Counter(small), Counter(big)
    return all(cb[x] >= k for x, k in cs.items())


def explain_canonical_td(g: Graph, td: TreeDecomposition, family: FamilyId) -> Optional[str]:
    if not td.bags:
        return None if g.n == 0 else "empty decomposition for a non-empty graph"
    if sum(1 for p in td.parents if p is None) != 1 or td.parents[0] is not None:
        return "node 0 must be the unique root"
    n_nodes = len(td.bags)
    for i, p in enumerate(td.parents):
        if p is not None and not 0 <= p < n_nodes:
            return f"node {i} has invalid parent"
    depths = [td.depth(i) for i in range(n_nodes)]
    if max(depths) % 2 != 0:
        return "maximum depth must be even"
    kind, order = family.kind, family.order
    if kind == "MP":
        return "MP has no canonical tree decomposition family"
    width = {"Sub": 2, "L": 2, "LF": 2, "F": 2}[kind]
    if order is not None:
        width = order
    for i, bag in enumerate(td.bags):
        expect = width if depths[i] % 2 == 0 else width + 1
        if len(bag) != expect:
            return f"bag {i} has size {len(bag)}, expected {expect} at depth {depths[i]}"
        for v in bag:
            if not 0 <= v < g.n:
                return f"bag {i} mentions unknown vertex {v}"
    for i, p in enumerate(td.parents):
        if p is None:
            continue
        even, odd = (p, i) if depths[p] % 2 == 0 else (i, p)
        if {depths[even] % 2, depths[odd] % 2} != {0, 1}:
            return "tree edges must alternate even/odd depth"
        if not _multiset_leq(td.bags[even], td.bags[odd]):
            return f"even bag {even} must be a sub-multiset of odd bag {odd}"
    for u, v in g.edges:
        if not any(u in bag and v in bag for bag in td.bags):
            return f"edge ({u},{v}) is in no bag"
    for v in range(g.n):
        holding = [i for i, bag in enumerate(td.bags) if v in bag]
        if not holding:
            return f"vertex {v} is in no bag"
        hold = set(holding)
        seen = {holding[0]}
        stack = [holding[0]]
        neigh: dict[int, list[int]] = {i: [] for i in hold}
        for i in hold:
            p = td.parents[i]
            if p is not None and p in hold:
                neigh[i].append(p)
                neigh[p].append(i)
        while stack:
            x = stack.pop()
            for y in neigh[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if seen != hold:
            return f"bags containing vertex {v} are not connected"
    if kind == "Sub":
        k = 1 if order is None else order
        if order is None:
            if not any(all(u in bag for bag in td.bags) for u in range(g.n)):
                return "no vertex shared by every bag"
        else:
            from collections import Counter

            common = Counter(td.bags[0])
            for bag in td.bags[1:]:
                cb = Counter(bag)
                common = Counter({x: min(c, cb[x]) for x, c in common.items() if cb[x]})
            if sum(common.values()) < k:
                return f"no {k}-multiset shared by every bag"
    elif kind in ("L", "LF"):
        for i in range(n_nodes):
            if depths[i] % 2 == 1 and len(td.children(i)) > 1:
                if kind == "L":
                    return f"odd node {i} has more than one child"
                p = td.parents[i]
                diff = list(td.bags[i])
                for v in td.bags[p]:
                    diff.remove(v)
                w = diff[0]
                closed = set()
                for u in td.bags[p]:
                    closed.add(u)
                    closed.update(g.neighbors(u))
                if w not in closed:
                    return f"odd node {i} branches on a non-neighbor of its parent bag"
    return None


def validate_canonical_td(g: Graph, td: TreeDecomposition, family: FamilyId) -> bool:
    return explain_canonical_td(g, td, family) is None


# ---------------------------------------------------------------------------
# The game.

_GAME_MODELS = ("Sub", "L", "LF", "F")


class _PebbleGame:
    def __init__(self, g: Graph, kind: str):
        if kind not in _GAME_MODELS:
            raise DomainError(f"no pebble game for family {kind}")
        self.g = g
        self.kind = kind
        self._cc: dict[frozenset, list[frozenset]] = {}
        self.memo: dict = {}
        self.plan: dict = {}

    def cc(self, seps: frozenset) -> list[frozenset]:
        got = self._cc.get(seps)
        if got is None:
            got = [frozenset(c) for c in edge_components(self.g, seps)]
            self._cc[seps] = got
        return got

    def pieces_within(self, P: frozenset, seps: frozenset) -> list[frozenset]:
        return [c for c in self.cc(seps) if c <= P]

    def comp_containing(self, piece: frozenset, seps: frozenset) -> frozenset:
        probe = next(iter(piece))
        for c in self.cc(seps):
            if probe in c:
                return c
        raise AssertionError("edge not in any component")

    # -- state helpers ------------------------------------------------------

    def _pair(self, a: int, b: int) -> tuple[int, int]:
        if self.kind == "Sub":
            return (a, b)  # slot 0 is the pinned pebble
        return (a, b) if a <= b else (b, a)

    @staticmethod
    def _instant(piece: frozenset, seps: frozenset) -> bool:
        if len(piece) != 1:
            return False
        (e,) = piece
        return e[0] in seps and e[1] in seps

    # -- solving ------------------------------------------------------------

    def win1(self, a: int, P: frozenset) -> bool:
        """One pebble down (the pinned one for Sub); Alice places the second."""
        key = ((a,), P)
        if key in self.memo:
            return self.memo[key]
        self.memo[key] = False
        result = False
        if len(P) == 1:
            result = True
        else:
            for w in range(self.g.n):
                seps = frozenset((a, w))
                pieces = self.pieces_within(P, seps)
                succs = []
                good = True
                for piece in pieces:
                    if self._instant(piece, seps):
                        continue
                    if len(piece) == 1 or self.win2(self._pair(a, w), piece):
                        succs.append((piece, self._pair(a, w)))
                    else:
                        good = False
                        break
                if good:
                    self.plan[key] = ("place", w, succs)
                    result = True
                    break
        self.memo[key] = result
        return result

    def win2(self, pair: tuple[int, int], P: frozenset) -> bool:
        key = (pair, P)
        if key in self.memo:
            return self.memo[key]
        self.memo[key] = False
        if len(P) == 1:
            self.memo[key] = True
            return True
        result = False
        for move in self._moves(pair, P):
            if move is not None:
                self.plan[key] = move
                result = True
                break
        self.memo[key] = result
        return result

    def _ok_succ(self, P: frozenset, new_pair: tuple[int, int], P2: frozenset) -> bool:
        if len(P2) == 1:
            return True
        return P2 < P and self.win2(new_pair, P2)

    def _moves(self, pair: tuple[int, int], P: frozenset):
        g, kind = self.g, self.kind
        a, b = pair
        teleport_idx = (1,) if kind == "Sub" else (0, 1) if kind in ("L", "LF") else ()
        walk_idx = (1,) if kind == "Sub" else (0, 1) if kind == "L" else ()

        for i in teleport_idx:
            kept = pair[1 - i]
            hat = self.comp_containing(P, frozenset((kept,)))
            for w in range(g.n):
                seps = frozenset((kept, w))
                new_pair = self._pair(kept, w) if kind != "Sub" else (pair[0], w)
                succs = []
                good = True
                for piece in self.pieces_within(hat, seps):
                    if self._instant(piece, seps):
                        continue
                    if self._ok_succ(P, new_pair, piece):
                        succs.append((piece, new_pair))
                    else:
                        good = False
                        break
                if good:
                    yield ("move", w, succs)

        for i in walk_idx:
            kept = pair[1 - i]
            for w in g.neighbors(pair[i]):
                mid = frozenset((a, b, w))
                final = frozenset((kept, w))
                new_pair = self._pair(kept, w) if kind != "Sub" else (pair[0], w)
                succs = []
                good = True
                for piece in self.pieces_within(P, mid):
                    if self._instant(piece, mid):
                        continue
                    merged = self.comp_containing(piece, final)
                    if self._ok_succ(P, new_pair, merged):
                        succs.append((merged, new_pair))
                    else:
                        good = False
                        break
                if good:
                    yield ("move", w, succs)

        if kind in ("LF", "F"):
            if kind == "LF":
                targets = sorted(set(g.neighbors(a)) | set(g.neighbors(b)))
            else:
                targets = range(g.n)
            for w in targets:
                mid = frozenset((a, b, w))
                options = [
                    (self._pair(pair[1], w), frozenset((pair[1], w))),
                    (self._pair(pair[0], w), frozenset((pair[0], w))),
                ]
                succs = []
                good = True
                for piece in self.pieces_within(P, mid):
                    if self._instant(piece, mid):
                        continue
                    chosen = None
                    for new_pair, final in options:
                        merged = self.comp_containing(piece, final)
                        if self._ok_succ(P, new_pair, merged):
                            chosen = (merged, new_pair)
                            break
                    if chosen is None:
                        good = False
                        break
                    succs.append(chosen)
                if good:
                    yield ("move", w, succs)


def game_membership(g: Graph, family: FamilyId) -> bool:
    """Connected-graph membership in the model's family via the pebble game."""
    kind = family.kind
    if family.order is not None:
        raise DomainError("the pebble game covers the width-2 families only")
    if kind == "MP":
        raise DomainError("no pebble game for MPNN")
    if g.m == 0:
        return True
    if not is_connected(g):
        raise DomainError("the pebble game is defined for connected graphs")
    game = _PebbleGame(g, kind)
    return _winning_first_pebble(game) is not None


def _winning_first_pebble(game: _PebbleGame) -> Optional[int]:
    for u in range(game.g.n):
        if all(game.win1(u, Q) for Q in game.cc(frozenset((u,)))):
            return u
    return None


# ---------------------------------------------------------------------------
# Reconstruction (Thm-style): root bag {u,u}; each game state spawns an odd
# child; successors grouped by pebble pair become its even children.


class _TdBuilder:
    def __init__(self, game: _PebbleGame):
        self.game = game
        self.parents: list[Optional[int]] = []
        self.bags: list[tuple[int, ...]] = []

    def new_node(self, parent: Optional[int], bag: Sequence[int]) -> int:
        self.parents.append(parent)
        self.bags.append(tuple(sorted(bag)))
        return len(self.bags) - 1

    def expand_state(self, even_node: int, pebbles: tuple[int, ...], P: frozenset) -> None:
        bag = self.bags[even_node]
        if len(P) == 1:
            (e,) = P
            if e[0] in bag and e[1] in bag:
                return
            missing = [v for v in e if v not in bag]
            w = missing[0]
            odd = self.new_node(even_node, bag + (w,))
            self.new_node(odd, e)
            return
        record = self.game.plan[(pebbles, P)]
        _, w, succs = record
        odd = self.new_node(even_node, bag + (w,))
        by_pair: dict[tuple[int, int], list[frozenset]] = {}
        for piece, new_pair in succs:
            by_pair.setdefault(new_pair, []).append(piece)
        if not by_pair:
            # all Bob responses were immediate wins; pad one even child so the
            # maximum depth stays even
            if self.game.kind == "Sub":
                self.new_node(odd, (pebbles[0], w))
            else:
                self.new_node(odd, (min(pebbles[0], w), max(pebbles[0], w)) if pebbles[0] != w else (w, w))
            return
        for new_pair, pieces in sorted(by_pair.items()):
            child = self.new_node(odd, new_pair)
            for piece in pieces:
                self.expand_state(child, new_pair, piece)


def _edgeless_td(g: Graph, family: FamilyId) -> TreeDecomposition:
    # chain through the vertices, keeping vertex 0 in every bag
    anchor = 0
    parents: list[Optional[int]] = [None]
    bags: list[tuple[int, ...]] = [(anchor, anchor)]
    prev_even = 0
    for v in range(1, g.n):
        odd = len(bags)
        parents.append(prev_even)
        bags.append(tuple(sorted(bags[prev_even] + (v,))))
        parents.append(odd)
        bags.append(tuple(sorted((anchor, v))))
        prev_even = odd + 1
    return TreeDecomposition(tuple(parents), tuple(bags))


def find_canonical_td(
    g: Graph, family: FamilyId, root_bag: Optional[Sequence[int]] = None
) -> Optional[TreeDecomposition]:
    """Search the pebble game and rebuild a witness decomposition, or None.

    ``root_bag`` (a multiset of one or two vertices) pins the initial pebbles:
    {u} or {u,u} fixes Alice's first pebble; a pair {a,b} with a != b starts
    the game with both pebbles placed (root bag {a,b}).
    """
    kind = family.kind
    if family.order is not None or kind == "MP":
        raise DomainError("canonical-TD search covers the width-2 families Sub/L/LF/F")
    if g.m == 0:
        if root_bag is not None:
            raise DomainError("root_bag unsupported for edgeless graphs")
        return _edgeless_td(g, family) if g.n else TreeDecomposition((), ())
    if not is_connected(g):
        raise DomainError("canonical-TD search is defined for connected graphs")
    game = _PebbleGame(g, kind)
    builder = _TdBuilder(game)
    if root_bag is None:
        u = _winning_first_pebble(game)
        if u is None:
            return None
        root = builder.new_node(None, (u, u))
        for Q in game.cc(frozenset((u,))):
            _expand_place(builder, game, root, u, Q)
    else:
        rb = tuple(sorted(root_bag))
        if len(rb) == 1:
            rb = (rb[0], rb[0])
        if len(rb) != 2:
            raise DomainError("root_bag must hold one or two vertices")
        a, b = rb
        if a == b:
            if not all(game.win1(a, Q) for Q in game.cc(frozenset((a,)))):
                return None
            root = builder.new_node(None, (a, a))
            for Q in game.cc(frozenset((a,))):
                _expand_place(builder, game, root, a, Q)
        else:
            if kind == "Sub":
                raise DomainError("Sub root bags are of the form {u,u}")
            pair = game._pair(a, b)
            if not all(game.win2(pair, Q) for Q in game.cc(frozenset((a, b)))):
                return None
            root = builder.new_node(None, pair)
            for Q in game.cc(frozenset((a, b))):
                builder.expand_state(root, pair, Q)
    return TreeDecomposition(tuple(builder.parents), tuple(builder.bags))


def _expand_place(builder: _TdBuilder, game: _PebbleGame, root: int, u: int, Q: frozenset) -> None:
    """Expand a one-pebble state under the root node (bag {u,u})."""
    if len(Q) == 1:
        (e,) = Q
        bag = builder.bags[root]
        if e[0] in bag and e[1] in bag:
            return
        missing = [v for v in e if v != u]
        odd = builder.new_node(root, (u, u, missing[0]))
        builder.new_node(odd, e)
        return
    record = game.plan[((u,), Q)]
    _, w, succs = record
    odd = builder.new_node(root, (u, u, w))
    pair = game._pair(u, w) if game.kind != "Sub" else (u, w)
    child = builder.new_node(odd, pair)
    if not succs:
        return
    for piece, new_pair in succs:
        builder.expand_state(child, new_pair, piece)
