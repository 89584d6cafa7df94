"""Closed-form performance model of the three-level database hierarchy.

Each database is an M/G/1 queue; its mean response time follows the
Pollaczek-Khinchine formula from the first two moments of its service
time.  The per-level service laws for direct files are two-point mixes of
one and two storage accesses (the mix follows from which request classes
must touch both the index and the data file), which this module exposes
as samplable distributions so the event simulator can draw from exactly
the distributions the formulas assume.  T-tree service moments come from
empirical measurement (`locdb.index.service`).

All quantities here are SI: seconds, events per second.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from locdb.index.service import ServiceTimeEstimate
from locdb.params import SystemParams, WorkloadRates, arrival_rates

__all__ = [
    "SaturationError",
    "NoFeasibleIndexError",
    "QueueStats",
    "LevelDelays",
    "IndexChoice",
    "DeterministicService",
    "TwoPointService",
    "EmpiricalService",
    "pk_response_time",
    "update_delay",
    "delivery_delay",
    "service_db0_memdirect",
    "service_db1_memdirect",
    "service_db2_memdirect",
    "service_memdirect",
    "service_diskdirect",
    "service_ttree",
    "service_distribution",
    "storage_feasible_direct",
    "storage_feasible_ttree",
    "select_index",
    "response_curves",
    "level_delays",
    "CurvePoint",
]

TTREE_SAMPLE_FLOOR = 1000  # minimum samples behind an empirical estimate


class SaturationError(RuntimeError):
    """Offered load meets or exceeds capacity: no finite response time."""


class NoFeasibleIndexError(RuntimeError):
    """No index choice fits the storage constraint (or all saturate)."""


@dataclass(frozen=True)
class QueueStats:
    """First two service-time moments plus the arrival rate of one queue."""

    mean_service: float   # s
    var_service: float    # s^2
    arrival_rate: float   # 1/s

    def __post_init__(self) -> None:
        if self.mean_service <= 0:
            raise ValueError("mean service time must be positive")
        if self.var_service < 0:
            raise ValueError("service variance must be non-negative")
        if self.arrival_rate < 0:
            raise ValueError("arrival rate must be non-negative")

    @property
    def utilization(self) -> float:
        return self.arrival_rate * self.mean_service


@dataclass(frozen=True)
class LevelDelays:
    """Per-level response times (seconds) for DB0, DB1, DB2."""

    t0: float
    t1: float
    t2: float


class IndexChoice(Enum):
    MEMORY_DIRECT = "memory-direct"
    TTREE = "ttree"
    DISK_DIRECT = "disk-direct"

    @property
    def token(self) -> str:
        return self.value


# selection preference on response-time ties
_TIE_ORDER = {IndexChoice.MEMORY_DIRECT: 0, IndexChoice.TTREE: 1,
              IndexChoice.DISK_DIRECT: 2}


# ---------------------------------------------------------------------------
# response time and end-to-end delays
# ---------------------------------------------------------------------------

def pk_response_time(q: QueueStats) -> float:
    """M/G/1 mean response time:  E[S] + lam*(Var[S]+E[S]^2) / (2*(1-lam*E[S])).

    Raises SaturationError when the utilization lam*E[S] reaches 1.
    """
    util = q.utilization
    if util >= 1.0:
        raise SaturationError(
            f"utilization {util:.4g} >= 1 "
            f"(rate {q.arrival_rate:.4g}/s, mean service {q.mean_service:.4g}s)")
    return q.mean_service + q.arrival_rate * (
        q.var_service + q.mean_service ** 2) / (2.0 * (1.0 - util))


def update_delay(d: LevelDelays, q0: float, q1: float) -> float:
    """End-to-end location-update delay: 2*T2 + (1+q0+q1)*T1 + (2*q0+q1)*T0."""
    return 2 * d.t2 + (1 + q0 + q1) * d.t1 + (2 * q0 + q1) * d.t0


def delivery_delay(d: LevelDelays, p0: float, p1: float, p2: float) -> float:
    """End-to-end call-delivery delay:
    (1+p0+p1+p2)*T2 + (2*p0+2*p1+p2)*T1 + (2*p0+p1)*T0.
    """
    return ((1 + p0 + p1 + p2) * d.t2
            + (2 * p0 + 2 * p1 + p2) * d.t1
            + (2 * p0 + p1) * d.t0)


# ---------------------------------------------------------------------------
# service-time distributions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DeterministicService:
    value: float  # s

    @property
    def mean(self) -> float:
        return self.value

    @property
    def var(self) -> float:
        return 0.0

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return np.full(n, self.value)


@dataclass(frozen=True)
class TwoPointService:
    """Service takes ``high`` with probability ``p_high``, else ``low``."""

    low: float
    high: float
    p_high: float

    @property
    def mean(self) -> float:
        return self.low + (self.high - self.low) * self.p_high

    @property
    def var(self) -> float:
        return self.p_high * (1 - self.p_high) * (self.high - self.low) ** 2

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        draws = rng.random(n)
        return np.where(draws < self.p_high, self.high, self.low)


@dataclass(frozen=True)
class EmpiricalService:
    """Resamples a measured per-probe service-time pool (seconds)."""

    pool: np.ndarray

    @property
    def mean(self) -> float:
        return float(self.pool.mean())

    @property
    def var(self) -> float:
        return float(self.pool.var(ddof=1)) if self.pool.size > 1 else 0.0

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return self.pool[rng.integers(0, self.pool.size, size=n)]


def _db0_high_fraction(p: SystemParams, w: WorkloadRates) -> float:
    """Fraction of root-database requests that touch both index and data file.

    Requests that resolve inside this subsystem, or arrive from a peer
    root, read the index and the profile (two accesses); pass-through
    lookups for users hosted elsewhere stop at the index (one access).
    """
    denom = (2 * p.q0 + p.q1) * w.lambda_u + (2 * p.p0 + p.p1) * w.lambda_c
    if denom <= 0.0:
        raise SaturationError("no load offered to DB0: service mix undefined")
    num = (p.q0 + p.q1) * w.lambda_u + (p.p0 + p.p1) * w.lambda_c
    return num / denom


def _db2_high_fraction(p: SystemParams, w: WorkloadRates) -> float:
    """Fraction of leaf-database requests that cost two accesses."""
    _, _, lam2 = arrival_rates(p, w)
    if lam2 <= 0.0:
        raise SaturationError("no load offered to DB2: service mix undefined")
    return (2 * w.lambda_u + w.lambda_c) / lam2


def _direct_distribution(level: int, p: SystemParams, w: WorkloadRates,
                         unit: float):
    if level == 0:
        return TwoPointService(unit, 2 * unit, _db0_high_fraction(p, w))
    if level == 1:
        return DeterministicService(unit)
    if level == 2:
        return TwoPointService(unit, 2 * unit, _db2_high_fraction(p, w))
    raise ValueError(f"level must be 0, 1, or 2, got {level}")


def service_memdirect(p: SystemParams, w: WorkloadRates, level: int) -> QueueStats:
    """Service moments of a memory-resident direct file at the given level."""
    dist = _direct_distribution(level, p, w, p.ts)
    lam = arrival_rates(p, w)[level]
    return QueueStats(dist.mean, dist.var, lam)


def service_db0_memdirect(p: SystemParams, w: WorkloadRates) -> QueueStats:
    return service_memdirect(p, w, 0)


def service_db1_memdirect(p: SystemParams, w: WorkloadRates | None = None) -> QueueStats:
    w = p.workload() if w is None else w
    return service_memdirect(p, w, 1)


def service_db2_memdirect(p: SystemParams, w: WorkloadRates) -> QueueStats:
    return service_memdirect(p, w, 2)


def service_diskdirect(p: SystemParams, w: WorkloadRates, level: int) -> QueueStats:
    """Disk-resident direct file: block access time replaces memory access time."""
    dist = _direct_distribution(level, p, w, p.tb)
    lam = arrival_rates(p, w)[level]
    return QueueStats(dist.mean, dist.var, lam)


def service_ttree(p: SystemParams, est: ServiceTimeEstimate,
                  level_rate: float) -> QueueStats:
    """Queue moments from an empirical T-tree measurement (microseconds in)."""
    if est.sample_count < TTREE_SAMPLE_FLOOR:
        raise ValueError(
            f"estimate based on {est.sample_count} samples; "
            f"need at least {TTREE_SAMPLE_FLOOR}")
    return QueueStats(est.mean_us * 1e-6, est.var_us2 * 1e-12, level_rate)


def service_distribution(level: int, choice: IndexChoice, p: SystemParams,
                         w: WorkloadRates,
                         ttree_est: ServiceTimeEstimate | None = None):
    """(QueueStats, samplable distribution) for one level and index choice."""
    if choice is IndexChoice.MEMORY_DIRECT:
        dist = _direct_distribution(level, p, w, p.ts)
    elif choice is IndexChoice.DISK_DIRECT:
        dist = _direct_distribution(level, p, w, p.tb)
    elif choice is IndexChoice.TTREE:
        if ttree_est is None:
            raise ValueError("T-tree choice needs a ServiceTimeEstimate")
        stats = service_ttree(p, est=ttree_est,
                              level_rate=arrival_rates(p, w)[level])
        if ttree_est.samples_us is None:
            raise ValueError("estimate carries no sample pool to draw from")
        return stats, EmpiricalService(ttree_est.samples_us * 1e-6)
    else:
        raise ValueError(f"unknown index choice: {choice}")
    lam = arrival_rates(p, w)[level]
    return QueueStats(dist.mean, dist.var, lam), dist


# ---------------------------------------------------------------------------
# storage feasibility
# ---------------------------------------------------------------------------

def _profile_bytes(p: SystemParams, level: int) -> int:
    # mid-level databases hold routing entries only, no service profiles
    return 0 if level == 1 else p.profile_bytes


def storage_feasible_direct(p: SystemParams, n_resident: int, level: int) -> bool:
    """Direct file fits iff  Nt*Ei + Ni*M <= Phi_level.

    The slot table must reserve an entry for every possible subscriber
    (Nt), while profiles are stored only for the Ni residents.
    """
    need = p.nt * p.entry_bytes + n_resident * _profile_bytes(p, level)
    return need <= p.phi(level)


def storage_feasible_ttree(p: SystemParams, n_index_entries: int,
                           n_resident: int, level: int) -> bool:
    """T-tree fits iff  Nie*(3*a1 + 2*a2 + Y1*Ei)/(kappa*Y1) + Ni*M <= Phi_level."""
    denom = p.kappa * p.y1
    if denom <= 0:
        raise ValueError("kappa * Y1 must be positive")
    node_bytes = 3 * p.a1_bytes + 2 * p.a2_bytes + p.y1 * p.entry_bytes
    need = n_index_entries * node_bytes / denom + n_resident * _profile_bytes(p, level)
    return need <= p.phi(level)


# ---------------------------------------------------------------------------
# index selection and density sweeps
# ---------------------------------------------------------------------------

def select_index(level: int, p: SystemParams, w: WorkloadRates,
                 ttree_est: ServiceTimeEstimate | None,
                 n_index_entries: int, n_resident: int) -> IndexChoice:
    """Pick the feasible index with the lowest response time at this level.

    Candidates must pass the storage constraint and be stable at the
    level's arrival rate.  Ties prefer memory-direct, then T-tree, then
    disk-direct.  The T-tree is considered only when an estimate is given.
    """
    candidates: list[tuple[float, int, IndexChoice]] = []
    lam = arrival_rates(p, w)[level]

    def consider(choice: IndexChoice, stats: QueueStats) -> None:
        try:
            t = pk_response_time(stats)
        except SaturationError:
            return
        candidates.append((t, _TIE_ORDER[choice], choice))

    if storage_feasible_direct(p, n_resident, level):
        consider(IndexChoice.MEMORY_DIRECT, service_memdirect(p, w, level))
        consider(IndexChoice.DISK_DIRECT, service_diskdirect(p, w, level))
    if ttree_est is not None and storage_feasible_ttree(
            p, n_index_entries, n_resident, level):
        consider(IndexChoice.TTREE, service_ttree(p, ttree_est, lam))
    if not candidates:
        raise NoFeasibleIndexError(
            f"no index choice is feasible and stable for level {level}")
    return min(candidates)[2]


@dataclass(frozen=True)
class CurvePoint:
    """One density point of a response-time curve."""

    rho: float
    level: int
    choice: IndexChoice
    arrival_rate: float     # 1/s
    mean_service: float     # s
    var_service: float      # s^2
    response: float | None  # s; None when saturated
    saturated: bool


def response_curves(p: SystemParams, rho_sweep, choice: IndexChoice,
                    level: int,
                    ttree_est: ServiceTimeEstimate | None = None) -> list[CurvePoint]:
    """Response time vs user density for one level and index choice.

    Each density point recomputes the workload, the level arrival rate,
    and the service moments, then applies the M/G/1 formula.  Saturated
    points are flagged, never emitted as numbers.  A T-tree estimate is
    measured once on a fixed reference tree and reused across the sweep
    (tree depth varies only logarithmically with population).
    """
    rhos = list(rho_sweep)
    if not rhos:
        raise ValueError("density sweep must not be empty")
    points = []
    for rho in rhos:
        pr = p.with_density(float(rho))
        w = pr.workload()
        if choice is IndexChoice.TTREE:
            stats, _ = service_distribution(level, choice, pr, w, ttree_est)
        else:
            stats, _ = service_distribution(level, choice, pr, w)
        try:
            t = pk_response_time(stats)
            saturated = False
        except SaturationError:
            t = None
            saturated = True
        points.append(CurvePoint(float(rho), level, choice, stats.arrival_rate,
                                 stats.mean_service, stats.var_service,
                                 t, saturated))
    return points


def level_delays(p: SystemParams, w: WorkloadRates,
                 choices: tuple[IndexChoice, IndexChoice, IndexChoice] = (
                     IndexChoice.MEMORY_DIRECT,) * 3,
                 ttree_est: ServiceTimeEstimate | None = None) -> LevelDelays:
    """Per-level response times under the given index choices."""
    ts = []
    for level in range(3):
        stats, _ = service_distribution(level, choices[level], p, w, ttree_est)
        ts.append(pk_response_time(stats))
    return LevelDelays(*ts)
