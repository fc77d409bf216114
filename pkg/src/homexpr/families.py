"""Family identifiers and membership deciders for every model family.

Primary deciders use the cheapest exact characterization: forest test (MP),
single-vertex deletion (Sub), bounded deletion sets (Sub(k)), exact treewidth
(F, F(k)), and the nested-ear search (L, LF).  The pebble-game decider in
:mod:`homexpr.pebble` independently cross-checks L/LF in the test suite.

Disconnected graphs: MP/L/LF/F(k) memberships are decided per connected
component; Sub/Sub(k) need one global deletion set.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional

from .errors import DomainError
from .graphs import (
    Graph,
    RootedGraph,
    connected_components,
    induced_subgraph,
    is_forest,
    is_tree,
    vertex_deleted,
)
from .ears import NedVariant, find_ned
from .limits import LIMITS, Limits
from .treewidth import treewidth


@dataclass(frozen=True)
class FamilyId:
    """One of MP, Sub, L, LF, F, Sub(k) with k >= 0, F(k) with k >= 1."""

    kind: str
    order: Optional[int] = None

    _BASE = ("MP", "Sub", "L", "LF", "F")

    def __post_init__(self):
        if self.kind not in self._BASE:
            raise ValueError(f"unknown family kind {self.kind!r}")
        if self.order is not None:
            if self.kind == "Sub" and self.order >= 0:
                return
            if self.kind == "F" and self.order >= 1:
                return
            raise ValueError(f"bad order {self.order} for family {self.kind}")

    def __str__(self) -> str:
        return self.kind if self.order is None else f"{self.kind}({self.order})"

    @classmethod
    def parse(cls, text: str) -> "FamilyId":
        text = text.strip()
        if "(" in text:
            kind, _, rest = text.partition("(")
            order = rest.rstrip(")")
            if not order.isdigit():
                raise ValueError(f"bad family {text!r}")
            return cls(_canon_kind(kind), int(order))
        return cls(_canon_kind(text))


def _canon_kind(kind: str) -> str:
    for base in FamilyId._BASE:
        if base.lower() == kind.strip().lower():
            return base
    raise ValueError(f"unknown family {kind!r}")


MP = FamilyId("MP")
SUB = FamilyId("Sub")
L = FamilyId("L")
LF = FamilyId("LF")
F = FamilyId("F")

BASE_FAMILIES = (MP, SUB, L, LF, F)

_NED_VARIANT = {
    "Sub": NedVariant.ENDPOINT_SHARED,
    "L": NedVariant.STRONG,
    "LF": NedVariant.ALMOST_STRONG,
    "F": NedVariant.GENERAL,
}


def deletion_witness(g: Graph, k: int, limits: Limits = LIMITS) -> Optional[tuple[int, ...]]:
    """Smallest vertex set of size <= k whose removal leaves a forest, or None."""
    if k > limits.max_deletion_set:
        raise DomainError(f"deletion sets limited to k <= {limits.max_deletion_set}")
    for size in range(min(k, g.n) + 1):
        for combo in combinations(range(g.n), size):
            if is_forest(vertex_deleted(g, combo)[0]):
                return combo
    return None


def in_family(g: Graph, family: FamilyId, limits: Limits = LIMITS) -> bool:
    kind, order = family.kind, family.order
    if kind == "MP":
        return is_forest(g)
    if kind == "Sub":
        k = 1 if order is None else order
        return deletion_witness(g, k, limits) is not None
    if kind == "F":
        k = 2 if order is None else order
        return treewidth(g, limits) <= k
    # L / LF: strong or almost-strong NED, per connected component
    if order is not None:
        raise DomainError(f"higher-order {kind} families are not implemented")
    if treewidth(g, limits) > 2:  # strong/almost-strong NED implies a NED, so tw <= 2
        return False
    return find_ned(g, _NED_VARIANT[kind], limits=limits) is not None


def in_family_rooted(
    rg: RootedGraph, family: FamilyId, level: str, limits: Limits = LIMITS
) -> bool:
    """Node/edge-level membership for connected rooted graphs.

    Node level marks one vertex; edge level marks an ordered pair.  For the
    first-ear families (L/LF/F) a coincident pair (w,w) reduces to the
    node-level condition on w.
    """
    g = rg.graph
    if level not in ("node", "edge"):
        raise DomainError(f"level must be node or edge, got {level!r}")
    expected = 1 if level == "node" else 2
    if len(rg.roots) != expected:
        raise DomainError(f"{level} level needs {expected} roots, got {len(rg.roots)}")
    comps = connected_components(g)
    if len(comps) != 1:
        raise DomainError("node/edge-level families contain connected graphs only")
    kind, order = family.kind, family.order
    if kind == "MP":
        if level == "edge":
            raise DomainError("MPNN has no edge-level family")
        return is_tree(g)
    if kind == "Sub":
        if order not in (None, 1):
            raise DomainError("rooted membership is implemented for the base families")
        w = rg.roots[0]
        return is_forest(vertex_deleted(g, [w])[0])
    if order is not None:
        raise DomainError("rooted membership is implemented for the base families")
    roots = rg.roots if level == "edge" else (rg.roots[0],)
    if len(roots) == 2 and roots[0] == roots[1]:
        roots = (roots[0],)
    if g.m == 0:
        return True
    if treewidth(g, limits) > 2 and kind in ("L", "LF", "F"):
        return False
    return find_ned(g, _NED_VARIANT[kind], first_ear_endpoints=roots, limits=limits) is not None
