"""Homomorphism expressivity of color-refinement GNNs: exact combinatorial toolkit."""

from .errors import (
    DomainError,
    GraphValidationError,
    HomexprError,
    InternalConsistencyError,
    ParseError,
    ResourceLimitError,
)
from .graphs import (
    Graph,
    RootedGraph,
    categorical_product,
    connected_components,
    disjoint_union,
    is_forest,
    parse_edge_list,
    parse_graph6,
    to_edge_list,
    to_graph6,
    vertex_deleted,
)
from .canon import CanonicalForm, are_isomorphic, automorphism_count, canonical_form
from .enumerate_graphs import enumerate_connected_graphs, enumerate_rooted
from .treewidth import treewidth
from .homcount import hom_count, hom_vector, inj_hom_count, sub_count

__all__ = [
    "DomainError",
    "GraphValidationError",
    "HomexprError",
    "InternalConsistencyError",
    "ParseError",
    "ResourceLimitError",
    "Graph",
    "RootedGraph",
    "categorical_product",
    "connected_components",
    "disjoint_union",
    "is_forest",
    "parse_edge_list",
    "parse_graph6",
    "to_edge_list",
    "to_graph6",
    "vertex_deleted",
    "CanonicalForm",
    "are_isomorphic",
    "automorphism_count",
    "canonical_form",
    "enumerate_connected_graphs",
    "enumerate_rooted",
    "treewidth",
    "hom_count",
    "hom_vector",
    "inj_hom_count",
    "sub_count",
]
