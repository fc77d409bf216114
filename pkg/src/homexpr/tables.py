"""Batch classification over enumerated graphs; reproduces the paper tables.

Membership verdicts are memoized by canonical form across a whole run, which
matters because spasm images recur massively between patterns.  Output
ordering is size-lexicographic by (n, m, canonical form), so reports are
deterministic and diffable.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .canon import CanonicalForm, canonical_form
from .enumerate_graphs import enumerate_connected_graphs, enumerate_rooted
from .errors import DomainError
from .families import BASE_FAMILIES, FamilyId, MP, in_family, in_family_rooted
from .graphs import Graph, RootedGraph, as_rooted, cycle, path, to_graph6
from .limits import LIMITS, Limits
from .spasm import enumerate_spasm, subgraph_countable

LEVELS = ("graph", "node", "edge")


class Classifier:
    """Membership and countability with run-wide memoization."""

    def __init__(self, limits: Limits = LIMITS):
        self.limits = limits
        self._member: dict[tuple[CanonicalForm, str, str], bool] = {}

    def member(self, rg: Graph | RootedGraph, family: FamilyId, level: str) -> bool:
        rg = as_rooted(rg)
        key = (canonical_form(rg), str(family), level)
        got = self._member.get(key)
        if got is None:
            if level == "graph":
                got = in_family(rg.graph, family, self.limits)
            else:
                got = in_family_rooted(rg, family, level, self.limits)
            self._member[key] = got
        return got

    def countable(
        self, pattern: Graph | RootedGraph, family: FamilyId, level: str,
        images: Optional[list[RootedGraph]] = None,
    ) -> tuple[bool, Optional[RootedGraph]]:
        rp = as_rooted(pattern)
        if images is None:
            images = enumerate_spasm(rp, self.limits)
        for image in images:
            if not self.member(image, family, level):
                return False, image
        return True, None


def _universe(max_n: Optional[int], max_m: Optional[int], limits: Limits) -> list[Graph]:
    """Connected graphs with n <= max_n or m <= max_m, one per iso class."""
    seen: dict[CanonicalForm, Graph] = {}
    if max_n is not None:
        for g in enumerate_connected_graphs(max_vertices=max_n, limits=limits):
            seen.setdefault(canonical_form(g), g)
    if max_m is not None:
        for g in enumerate_connected_graphs(max_edges=max_m, limits=limits):
            seen.setdefault(canonical_form(g), g)
    graphs = [seen[k] for k in seen]
    graphs.sort(key=lambda g: (g.n, g.m, canonical_form(g).data))
    return graphs


def _columns(g: Graph, max_n: Optional[int], max_m: Optional[int]) -> list[tuple[str, int]]:
    cols = []
    if max_n is not None and 2 <= g.n <= max_n:
        cols.append(("n", g.n))
    if max_m is not None and 1 <= g.m <= max_m:
        cols.append(("m", g.m))
    return cols


def _families_for(level: str) -> tuple[FamilyId, ...]:
    return tuple(f for f in BASE_FAMILIES if not (level == "edge" and f is MP))


@dataclass
class CountTable:
    """counts[(level, family or 'All', (kind, size))] -> number of classes."""

    kind: str  # "hom" or "sub"
    max_n: Optional[int]
    max_m: Optional[int]
    counts: dict = field(default_factory=dict)

    def bump(self, level: str, family: str, col: tuple[str, int]) -> None:
        key = (level, family, col)
        self.counts[key] = self.counts.get(key, 0) + 1

    def cell(self, level: str, family: str, kind: str, size: int) -> int:
        return self.counts.get((level, family, (kind, size)), 0)

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out)
        writer.writerow(["level", "family", "by", "size", "count"])
        for (level, family, (kind, size)) in sorted(
            self.counts, key=lambda k: (LEVELS.index(k[0]), k[2][0], k[2][1], k[1])
        ):
            writer.writerow([level, family, kind, size, self.counts[(level, family, (kind, size))]])
        return out.getvalue()

    def to_json_dict(self) -> dict:
        return {
            "table": self.kind,
            "max_n": self.max_n,
            "max_m": self.max_m,
            "cells": [
                {"level": lv, "family": fam, "by": kind, "size": size, "count": count}
                for (lv, fam, (kind, size)), count in sorted(
                    self.counts.items(),
                    key=lambda kv: (LEVELS.index(kv[0][0]), kv[0][2], kv[0][1]),
                )
            ],
        }


def _rootings(g: Graph, level: str) -> list[RootedGraph]:
    if level == "graph":
        return [RootedGraph(g)]
    return enumerate_rooted(g, 1 if level == "node" else 2)


def hom_count_table(
    max_n: Optional[int] = 6,
    max_m: Optional[int] = 8,
    limits: Limits = LIMITS,
    classifier: Optional[Classifier] = None,
) -> CountTable:
    """Number of enumerated (rooted) connected graphs in each family."""
    cls = classifier or Classifier(limits)
    table = CountTable("hom", max_n, max_m)
    for g in _universe(max_n, max_m, limits):
        cols = _columns(g, max_n, max_m)
        if not cols:
            continue
        for level in LEVELS:
            for rg in _rootings(g, level):
                for col in cols:
                    table.bump(level, "All", col)
                for fam in _families_for(level):
                    if cls.member(rg, fam, level):
                        for col in cols:
                            table.bump(level, str(fam), col)
    return table


def sub_count_table(
    max_n: Optional[int] = 6,
    max_m: Optional[int] = 8,
    limits: Limits = LIMITS,
    classifier: Optional[Classifier] = None,
) -> CountTable:
    """Number of enumerated (rooted) connected graphs each model can
    subgraph-count (all spasm images inside the family)."""
    cls = classifier or Classifier(limits)
    table = CountTable("sub", max_n, max_m)
    for g in _universe(max_n, max_m, limits):
        cols = _columns(g, max_n, max_m)
        if not cols:
            continue
        for level in LEVELS:
            for rg in _rootings(g, level):
                images = enumerate_spasm(rg, limits)
                for col in cols:
                    table.bump(level, "All", col)
                for fam in _families_for(level):
                    ok, _ = cls.countable(rg, fam, level, images)
                    if ok:
                        for col in cols:
                            table.bump(level, str(fam), col)
    return table


# ---------------------------------------------------------------------------
# Example-style cycle/path table.


def _marked_cycle(n: int, marks: int) -> RootedGraph:
    g = cycle(n)
    return RootedGraph(g, ((0,) if marks == 1 else (0, 1))[:marks])


def _marked_path(n: int, marks: int) -> RootedGraph:
    g = path(n)
    return RootedGraph(g, ((0,) if marks == 1 else (0, 1))[:marks])


CYCLE_PATH_COLUMNS = (
    ("cycle", "graph"), ("cycle", "node"), ("cycle", "edge"),
    ("path", "graph"), ("path", "node"), ("path", "edge"),
)


def cycle_path_table(
    max_n: int = 9, limits: Limits = LIMITS, classifier: Optional[Classifier] = None
) -> dict[tuple[str, str, str], list[int]]:
    """For each model and column, the sizes n <= max_n it can subgraph-count.

    Cycles are marked on a vertex / an edge's endpoints; paths on an endpoint
    / an edge at the end of the path, following the usual convention.
    """
    cls = classifier or Classifier(limits)
    out: dict[tuple[str, str, str], list[int]] = {}
    for fam in BASE_FAMILIES:
        for structure, level in CYCLE_PATH_COLUMNS:
            if level == "edge" and fam is MP:
                out[(str(fam), structure, level)] = []
                continue
            sizes = []
            marks = {"graph": 0, "node": 1, "edge": 2}[level]
            lo = 3 if structure == "cycle" else 2
            for n in range(lo, max_n + 1):
                rg = (_marked_cycle if structure == "cycle" else _marked_path)(n, marks)
                ok, _ = cls.countable(rg, fam, level)
                if ok:
                    sizes.append(n)
            out[(str(fam), structure, level)] = sizes
    return out


# ---------------------------------------------------------------------------
# Full per-graph classification (graph level), with witnesses.


@dataclass(frozen=True)
class ClassificationRow:
    graph6: str
    n: int
    m: int
    roots: tuple[int, ...]
    hom_member: dict
    sub_countable: dict
    witness: dict

    def to_json_dict(self) -> dict:
        return {
            "graph6": self.graph6,
            "n": self.n,
            "m": self.m,
            "roots": list(self.roots),
            "hom_member": self.hom_member,
            "sub_countable": self.sub_countable,
            "witness": self.witness,
        }


def full_classification(
    max_n: Optional[int] = 6,
    max_m: Optional[int] = 8,
    limits: Limits = LIMITS,
    classifier: Optional[Classifier] = None,
) -> list[ClassificationRow]:
    cls = classifier or Classifier(limits)
    rows = []
    for g in _universe(max_n, max_m, limits):
        if not _columns(g, max_n, max_m):
            continue
        images = enumerate_spasm(g, limits)
        hom_member = {}
        sub_ok = {}
        witness = {}
        for fam in BASE_FAMILIES:
            hom_member[str(fam)] = cls.member(RootedGraph(g), fam, "graph")
            ok, wit = cls.countable(g, fam, "graph", images)
            sub_ok[str(fam)] = ok
            if not ok:
                witness[str(fam)] = to_graph6(wit.graph)
        rows.append(
            ClassificationRow(to_graph6(g), g.n, g.m, (), hom_member, sub_ok, witness)
        )
    return rows


def classification_to_json(rows: Iterable[ClassificationRow]) -> str:
    return json.dumps([r.to_json_dict() for r in rows], indent=2) + "\n"


def classification_to_csv(rows: Iterable[ClassificationRow]) -> str:
    out = io.StringIO()
    writer = csv.writer(out)
    fams = [str(f) for f in BASE_FAMILIES]
    writer.writerow(
        ["graph6", "n", "m"]
        + [f"hom_{f}" for f in fams]
        + [f"sub_{f}" for f in fams]
        + [f"witness_{f}" for f in fams]
    )
    for r in rows:
        writer.writerow(
            [r.graph6, r.n, r.m]
            + [int(r.hom_member[f]) for f in fams]
            + [int(r.sub_countable[f]) for f in fams]
            + [r.witness.get(f, "") for f in fams]
        )
    return out.getvalue()
