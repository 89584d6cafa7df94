"""Empirical service-time measurement for the index structures.

The analytic model needs the mean and variance of a database's service
time.  For direct files these are trivial; for the T-tree we measure them
by running an instrumented probe workload and pricing the access counters
through a configurable cost model instead of relying on a closed-form
tree-cost expression.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from locdb.index.directfile import DirectFile
from locdb.index.stats import AccessStats
from locdb.index.ttree import TTree
from locdb.params import SystemParams

__all__ = [
    "CostModel",
    "ServiceTimeEstimate",
    "measure_service_time",
    "build_uniform_ttree",
    "estimate_ttree_service",
]


@dataclass(frozen=True)
class CostModel:
    """Prices AccessStats counters in microseconds.

    T-tree probe cost is ``node_visit_us * nodes + comparison_us * cmps``.
    The default prices each traversal step and each comparison at the unit
    comparison/traversal time ``tc``; ``weighted=True`` additionally
    multiplies by the ``c1``/``c2`` coefficients for experiments with
    heavier per-step costs (the coefficient roles are not standardized, so
    this stays opt-in).  Direct-file probes cost one memory access or one
    disk block access per slot touched.
    """

    node_visit_us: float
    comparison_us: float
    memory_slot_us: float
    disk_slot_us: float

    @classmethod
    def from_params(cls, p: SystemParams, weighted: bool = False) -> "CostModel":
        tc_us = p.tc * 1e6
        w1 = p.c1 if weighted else 1.0
        w2 = p.c2 if weighted else 1.0
        return cls(
            node_visit_us=tc_us * w1,
            comparison_us=tc_us * w2,
            memory_slot_us=p.ts * 1e6,
            disk_slot_us=p.tb * 1e6,
        )

    def probe_cost_us(self, index: TTree | DirectFile, stats: AccessStats) -> float:
        if isinstance(index, TTree):
            return (self.node_visit_us * stats.nodes_visited
                    + self.comparison_us * stats.comparisons)
        slot = self.disk_slot_us if index.residency == "disk" else self.memory_slot_us
        return slot * stats.slot_accesses


@dataclass(frozen=True)
class ServiceTimeEstimate:
    """Sample mean/variance of per-probe service time, in microseconds."""

    mean_us: float
    var_us2: float
    sample_count: int
    samples_us: np.ndarray | None = field(default=None, compare=False, repr=False)
    extrapolated_levels: float = 0.0

    def __post_init__(self) -> None:
        if self.sample_count < 1:
            raise ValueError("estimate needs at least one sample")
        if self.var_us2 < 0:
            raise ValueError("variance must be non-negative")


def measure_service_time(index: TTree | DirectFile,
                         workload,
                         cost: CostModel) -> ServiceTimeEstimate:
    """Probe the index with every key in ``workload`` and price each probe.

    Returns the sample mean and the unbiased sample variance of the probe
    costs, with the raw per-probe samples attached for resampling.
    """
    keys = np.asarray(workload)
    if keys.size == 0:
        raise ValueError("workload must not be empty")
    samples = np.empty(keys.size, dtype=np.float64)
    if isinstance(index, TTree):
        for i, key in enumerate(keys):
            _, _, stats = index.search(int(key))
            samples[i] = (cost.node_visit_us * stats.nodes_visited
                          + cost.comparison_us * stats.comparisons)
    else:
        slot = cost.disk_slot_us if index.residency == "disk" else cost.memory_slot_us
        for i, key in enumerate(keys):
            _, _, stats = index.get(int(key))
            samples[i] = slot * stats.slot_accesses
    mean = float(samples.mean())
    var = float(samples.var(ddof=1)) if samples.size > 1 else 0.0
    return ServiceTimeEstimate(mean, var, int(samples.size), samples_us=samples)


def build_uniform_ttree(n_keys: int, y1: int = 15, seed: int = 0,
                        key_span: int | None = None) -> tuple[TTree, np.ndarray]:
    """Build a T-tree of ``n_keys`` distinct uniform keys; returns (tree, keys)."""
    if n_keys < 1:
        raise ValueError("n_keys must be >= 1")
    rng = np.random.default_rng(seed)
    span = key_span if key_span is not None else max(4 * n_keys, 1024)
    keys = rng.choice(span, size=n_keys, replace=False)
    tree = TTree(y1=y1)
    for k in keys:
        tree.insert(int(k))
    return tree, np.sort(keys)


def estimate_ttree_service(n_entries: int,
                           cost: CostModel,
                           y1: int = 15,
                           sample_cap: int = 10_000,
                           probes: int = 10_000,
                           seed: int = 0) -> ServiceTimeEstimate:
    """Service-time estimate for a T-tree holding ``n_entries`` items.

    Builds a measurement tree of at most ``sample_cap`` keys, probes it
    uniformly, and, when ``n_entries`` exceeds the measured tree, adds the
    cost of the extra balanced-tree levels (one node visit plus one
    minimum-key comparison per level, ``log2`` of the size ratio).  The
    extrapolation is recorded in ``extrapolated_levels``.
    """
    if n_entries < 1:
        raise ValueError("n_entries must be >= 1")
    m = min(n_entries, sample_cap)
    tree, keys = build_uniform_ttree(m, y1=y1, seed=seed)
    rng = np.random.default_rng(seed + 1)
    workload = rng.choice(keys, size=probes, replace=True)
    est = measure_service_time(tree, workload, cost)
    extra = math.log2((n_entries + 1) / (m + 1)) if n_entries > m else 0.0
    if extra <= 0.0:
        return est
    delta = (cost.node_visit_us + cost.comparison_us) * extra
    samples = est.samples_us + delta
    return ServiceTimeEstimate(est.mean_us + delta, est.var_us2,
                               est.sample_count, samples_us=samples,
                               extrapolated_levels=extra)
