"""The five color-refinement algorithms and representation-equality tests.

Colors live in one *session*: a shared injective interner maps each
(previous color, aggregated context) tuple to a fresh dense integer, so
colors are comparable across all graphs refined together and never across
sessions.  No numeric hashing anywhere; interning is the perfect hash the
update rules assume.

Update rules (vertex u, ordered pair (u,v), neighborhoods in the unit's own
graph):

* MP   -- vertex colors; aggregate over N(u).
* Sub  -- pair colors; aggregate chi(u,w) over w in N(v); initial color
          (label(v), u==v).
* L    -- pair colors; aggregate chi(w,v) over N(u) and chi(u,w) over N(v)
          as two separate multisets; initial color = isomorphism type.
* LF   -- pair colors; one multiset of pairs (chi(w,v), chi(u,w)) over
          w in N(u) | N(v) (open neighborhoods).
* F    -- like LF with w ranging over all vertices.

Node features of pair models merge position-1 slices: chi(u) is the interned
multiset of chi(u,v) over v.  Graph representations are interned multisets of
node features.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from itertools import count
from typing import Hashable, Sequence

from .errors import DomainError
from .graphs import Graph, is_connected


class ModelId(str, Enum):
    MP = "MP"
    SUB = "Sub"
    L = "L"
    LF = "LF"
    F = "F"

    @classmethod
    def parse(cls, name: str) -> "ModelId":
        for member in cls:
            if member.value.lower() == name.lower():
                return member
        raise ValueError(f"unknown model {name!r}")


PAIR_MODELS = (ModelId.SUB, ModelId.L, ModelId.LF, ModelId.F)

_session_counter = count(1)


@dataclass(frozen=True)
class ColorAssignment:
    """Stable colors of one joint refinement session.

    ``unit_colors`` maps (graph index, unit) to a color id, where a unit is a
    vertex for MP and an ordered vertex pair otherwise.  Ids are comparable
    only within the same ``session_id``.
    """

    session_id: int
    model: ModelId
    unit_colors: dict = field(repr=False)
    node_colors: dict = field(repr=False)
    graph_colors: tuple[int, ...] = ()
    rounds: int = 0

    def node_color(self, graph_index: int, u: int) -> int:
        return self.node_colors[(graph_index, u)]

    def pair_color(self, graph_index: int, u: int, v: int) -> int:
        if self.model is ModelId.MP:
            raise DomainError("MP has no pair colors")
        return self.unit_colors[(graph_index, (u, v))]


class _Interner:
    __slots__ = ("_table",)

    def __init__(self):
        self._table: dict[Hashable, int] = {}

    def __call__(self, key: Hashable) -> int:
        table = self._table
        got = table.get(key)
        if got is None:
            got = len(table)
            table[key] = got
        return got


def refine(model: ModelId, graphs: Sequence[Graph]) -> ColorAssignment:
    """Run the model's refinement jointly over all graphs until no class splits."""
    if not graphs:
        raise DomainError("refine needs at least one graph")
    intern = _Interner()
    neighbors = [[g.neighbors(u) for u in range(g.n)] for g in graphs]

    if model is ModelId.MP:
        units = [(gi, u) for gi, g in enumerate(graphs) for u in range(g.n)]
        colors = {(gi, u): intern((graphs[gi].labels[u],)) for gi, u in units}

        def update(unit, colors):
            gi, u = unit
            return (colors[unit], tuple(sorted(colors[(gi, v)] for v in neighbors[gi][u])))

    elif model in PAIR_MODELS:
        units = [
            (gi, (u, v))
            for gi, g in enumerate(graphs)
            for u in range(g.n)
            for v in range(g.n)
        ]
        if model is ModelId.SUB:
            colors = {
                (gi, (u, v)): intern((graphs[gi].labels[v], u == v))
                for gi, (u, v) in units
            }
        else:
            colors = {
                (gi, (u, v)): intern(
                    (graphs[gi].labels[u], graphs[gi].labels[v], u == v, graphs[gi].has_edge(u, v))
                )
                for gi, (u, v) in units
            }

        if model is ModelId.SUB:

            def update(unit, colors):
                gi, (u, v) = unit
                return (
                    colors[unit],
                    tuple(sorted(colors[(gi, (u, w))] for w in neighbors[gi][v])),
                )

        elif model is ModelId.L:

            def update(unit, colors):
                gi, (u, v) = unit
                return (
                    colors[unit],
                    tuple(sorted(colors[(gi, (w, v))] for w in neighbors[gi][u])),
                    tuple(sorted(colors[(gi, (u, w))] for w in neighbors[gi][v])),
                )

        elif model is ModelId.LF:

            def update(unit, colors):
                gi, (u, v) = unit
                ws = set(neighbors[gi][u])
                ws.update(neighbors[gi][v])
                return (
                    colors[unit],
                    tuple(sorted((colors[(gi, (w, v))], colors[(gi, (u, w))]) for w in ws)),
                )

        else:  # F

            def update(unit, colors):
                gi, (u, v) = unit
                return (
                    colors[unit],
                    tuple(
                        sorted(
                            (colors[(gi, (w, v))], colors[(gi, (u, w))])
                            for w in range(graphs[gi].n)
                        )
                    ),
                )

    else:  # pragma: no cover
        raise DomainError(f"unknown model {model}")

    rounds = 0
    distinct = len(set(colors.values()))
    while True:
        colors = {unit: intern(update(unit, colors)) for unit in units}
        rounds += 1
        now = len(set(colors.values()))
        if now == distinct:
            break
        distinct = now

    if model is ModelId.MP:
        node_colors = dict(colors)
    else:
        node_colors = {
            (gi, u): intern(
                ("node", tuple(sorted(colors[(gi, (u, v))] for v in range(g.n))))
            )
            for gi, g in enumerate(graphs)
            for u in range(g.n)
        }
    graph_colors = tuple(
        intern(("graph", tuple(sorted(node_colors[(gi, u)] for u in range(g.n)))))
        for gi, g in enumerate(graphs)
    )
    return ColorAssignment(
        session_id=next(_session_counter),
        model=model,
        unit_colors=colors,
        node_colors=node_colors,
        graph_colors=graph_colors,
        rounds=rounds,
    )


def graph_repr_equal(model: ModelId, g: Graph, h: Graph) -> bool:
    session = refine(model, [g, h])
    return session.graph_colors[0] == session.graph_colors[1]


def node_repr(model: ModelId, g: Graph) -> dict[int, int]:
    session = refine(model, [g])
    return {u: session.node_colors[(0, u)] for u in range(g.n)}


def pair_repr(model: ModelId, g: Graph) -> dict[tuple[int, int], int]:
    if model is ModelId.MP:
        raise DomainError("MP has no pair-level representation")
    session = refine(model, [g])
    return {(u, v): session.unit_colors[(0, (u, v))] for u in range(g.n) for v in range(g.n)}


def _check_connected(*graphs: Graph) -> None:
    for g in graphs:
        if not is_connected(g):
            raise DomainError("node/edge-level comparisons are defined for connected graphs")


def node_equal(model: ModelId, g: Graph, u: int, h: Graph, v: int) -> bool:
    _check_connected(g, h)
    session = refine(model, [g, h])
    return session.node_colors[(0, u)] == session.node_colors[(1, v)]


def pair_equal(
    model: ModelId, g: Graph, uv: tuple[int, int], h: Graph, xy: tuple[int, int]
) -> bool:
    if model is ModelId.MP:
        raise DomainError("MP does not support pair-level comparison")
    _check_connected(g, h)
    session = refine(model, [g, h])
    return session.unit_colors[(0, tuple(uv))] == session.unit_colors[(1, tuple(xy))]
