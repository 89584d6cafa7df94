"""Index structures with instrumented access counting."""

from locdb.index.directfile import DirectFile
from locdb.index.service import (
    CostModel,
    ServiceTimeEstimate,
    build_uniform_ttree,
    estimate_ttree_service,
    measure_service_time,
)
from locdb.index.stats import AccessStats
from locdb.index.ttree import DuplicateKeyError, SearchResult, TNode, TTree, ValidationResult

__all__ = [
    "AccessStats",
    "CostModel",
    "DirectFile",
    "DuplicateKeyError",
    "SearchResult",
    "ServiceTimeEstimate",
    "TNode",
    "TTree",
    "ValidationResult",
    "build_uniform_ttree",
    "estimate_ttree_service",
    "measure_service_time",
]
