"""Configurable size limits.

Defaults follow the library contract (enumeration n<=8 or m<=9, treewidth and
isomorphism n<=12, spasm patterns n<=10, deletion sets k<=4, NED search budget).
The HOMEXPR_LIMITS environment variable overrides them with a comma-separated
list such as ``n=9,m=10,spasm=12``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Limits:
    max_enum_vertices: int = 8
    max_enum_edges: int = 9
    max_treewidth_vertices: int = 12
    max_spasm_vertices: int = 10
    max_deletion_set: int = 4
    ned_search_budget: int = 2_000_000

    def with_overrides(self, spec: str) -> "Limits":
        """Apply an override string like ``n=9,m=10,spasm=12,tw=14,k=5,budget=500000``."""
        fields = {
            "n": "max_enum_vertices",
            "m": "max_enum_edges",
            "tw": "max_treewidth_vertices",
            "spasm": "max_spasm_vertices",
            "k": "max_deletion_set",
            "budget": "ned_search_budget",
        }
        out = self
        for part in spec.split(","):
            part = part.strip()
            if not part:
                continue
            key, _, value = part.partition("=")
            if key.strip() not in fields or not value.strip().isdigit():
                raise ValueError(f"bad limit override {part!r}")
            out = replace(out, **{fields[key.strip()]: int(value)})
        return out


def default_limits() -> Limits:
    limits = Limits()
    env = os.environ.get("HOMEXPR_LIMITS")
    if env:
        limits = limits.with_overrides(env)
    return limits


LIMITS = default_limits()
