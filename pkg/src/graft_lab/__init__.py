"""Grafts, minimum joins and the distance-based decompositions built on them."""

from .decomposition import DistanceComponent, check_counts, check_primal_shift, components, noncap, universality_map
from .distance import dist, distance_matrix, distance_table, stratify
from .errors import (
    CapExceeded,
    DisconnectedError,
    FormatError,
    GraftError,
    ParityError,
    PreconditionError,
    PropertyViolation,
    SizeError,
)
from .graft_core import Graft, Graph, graft_from_json, induced_graft, is_join, load_graft, new_graft, weight
from .join_solver import allowed_edges, brute_force_min_join, enumerate_min_joins, is_conservative, min_join, nu
from .kl_decomp import check_ak2part, component_classes, kl_decomposition
from .negative_sets import check_neicomp2negset, max_negative_set, nei_comp_family

__all__ = [
    "CapExceeded", "DisconnectedError", "DistanceComponent", "FormatError", "Graft", "GraftError", "Graph",
    "ParityError", "PreconditionError", "PropertyViolation", "SizeError", "allowed_edges", "brute_force_min_join",
    "check_ak2part", "check_counts", "check_neicomp2negset", "check_primal_shift", "component_classes",
    "components", "dist", "distance_matrix", "distance_table", "enumerate_min_joins", "graft_from_json",
    "induced_graft", "is_conservative", "is_join", "kl_decomposition", "load_graft", "max_negative_set",
    "min_join", "new_graft", "nei_comp_family", "noncap", "nu", "stratify", "universality_map", "weight",
]
