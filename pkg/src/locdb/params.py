"""System parameters, configuration loading, and per-area workload rates.

``SystemParams`` is the single source of model constants.  Defaults
reproduce the published reference scenario (128 leaf databases, two-speed
user mix, 10 us memory access, 20 ms disk block access, and so on) so an
empty config file runs the full numeric example.  Times are normalized to
seconds internally; config files use the conventional units carried in
the key names (km, hr, us, ms).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path

__all__ = [
    "ConfigError",
    "SystemParams",
    "WorkloadRates",
    "load_config",
    "parse_config_text",
    "arrival_rates",
]


class ConfigError(ValueError):
    """Raised for unreadable, unparseable, or invariant-violating config."""


@dataclass(frozen=True)
class SystemParams:
    """Model constants for one distributed-database subsystem.

    Counts and probabilities are dimensionless.  ``ts``, ``tb``, ``tc``
    are in seconds; speeds in km/hr; ``boundary_km`` / ``area_km2`` in
    km / km^2; ``call_rate_per_hr`` per hour; ``density`` in users/km^2.
    Storage quantities (``entry_bytes`` .. ``phi2``) are bytes.
    """

    n0: int = 128          # DB2s under the DB0
    n1: int = 16           # DB2s under one DB1
    r1: float = 0.4        # fraction of users in the slow speed class
    r2: float = 0.1        # fraction of users in the fast speed class
    v1: float = 5.6        # slow-class speed, km/hr
    v2: float = 56.0       # fast-class speed, km/hr
    boundary_km: float = 30.3    # registration-area boundary length
    area_km2: float = 57.4       # registration-area area
    call_rate_per_hr: float = 1.4   # call originations per terminal per hour
    density: float = 415.0          # users per km^2
    q0: float = 0.05       # move crosses into a different DB0 area
    q1: float = 0.15       # move enters a new DB1 area within the DB0
    p0: float = 0.01       # caller/callee in different DB0 areas
    p1: float = 0.04       # same DB0, different DB1 areas
    p2: float = 0.45       # same DB1, different DB2 areas
    nt: int = 1_000_000_000    # total subscribers in the whole system
    y1: int = 15           # max data items per T-node
    y2: int = 8            # target min items for interior T-nodes (non-published default: ceil(y1/2))
    kappa: float = 0.95    # T-tree fill factor
    ts: float = 10e-6      # memory access time, s
    tb: float = 20e-3      # disk block access time, s
    tc: float = 1e-6       # unit comparison/traversal time, s
    c1: float = 10.0       # optional per-node-visit cost weight
    c2: float = 100.0      # optional per-comparison cost weight
    c3: float = 20.0       # reserved insert-cost weight
    c4: float = 1.0        # reserved delete-cost weight (non-published default)
    entry_bytes: int = 8         # index entry size (non-published default)
    profile_bytes: int = 512     # service-profile size (non-published default)
    a1_bytes: int = 8            # node-pointer size (non-published default)
    a2_bytes: int = 8            # min/max-element pointer size (non-published default)
    phi0: int = 2**40            # storage capacity of DB0 (non-published default)
    phi1: int = 2**40            # storage capacity of a DB1 (non-published default)
    phi2: int = 2**40            # storage capacity of a DB2 (non-published default)

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        """Raise ConfigError naming the offending key on any bad field."""
        probs = {
            "r1": self.r1, "r2": self.r2, "q0": self.q0, "q1": self.q1,
            "p0": self.p0, "p1": self.p1, "p2": self.p2,
        }
        for key, val in probs.items():
            if not 0.0 <= val <= 1.0:
                raise ConfigError(f"{key} out of [0,1]: {val}")
        if self.r1 + self.r2 > 1.0 + 1e-12:
            raise ConfigError(f"r1 + r2 exceeds 1: {self.r1 + self.r2}")
        if self.q0 + self.q1 > 1.0 + 1e-12:
            raise ConfigError(f"q0 + q1 exceeds 1: {self.q0 + self.q1}")
        if self.p0 + self.p1 + self.p2 > 1.0 + 1e-12:
            raise ConfigError(f"p0 + p1 + p2 exceeds 1: {self.p0 + self.p1 + self.p2}")
        if self.n1 < 1 or self.n0 < self.n1:
            raise ConfigError(f"need n0 >= n1 >= 1, got n0={self.n0} n1={self.n1}")
        if self.n0 % self.n1 != 0:
            raise ConfigError(f"n0 must be a multiple of n1, got n0={self.n0} n1={self.n1}")
        positive = {
            "v1": self.v1, "v2": self.v2, "L_km": self.boundary_km,
            "A_km2": self.area_km2, "xi_per_hr": self.call_rate_per_hr,
            "rho_users_per_km2": self.density, "Ts_us": self.ts,
            "Tb_ms": self.tb, "Tc_us": self.tc,
            "Nt": self.nt, "Ei_bytes": self.entry_bytes,
            "M_bytes": self.profile_bytes,
            "a1_bytes": self.a1_bytes, "a2_bytes": self.a2_bytes,
            "Phi0_bytes": self.phi0, "Phi1_bytes": self.phi1,
            "Phi2_bytes": self.phi2,
        }
        # speeds may be zero (stationary users); everything else strictly positive
        for key in ("v1", "v2"):
            if positive.pop(key) < 0:
                raise ConfigError(f"{key} must be non-negative")
        for key, val in positive.items():
            if val <= 0:
                raise ConfigError(f"{key} must be strictly positive, got {val}")
        if self.y1 < 1:
            raise ConfigError(f"Y1 must be >= 1, got {self.y1}")
        if self.y2 < 1 or self.y2 > self.y1:
            raise ConfigError(f"Y2 must be in [1, Y1], got {self.y2}")
        if not 0.0 < self.kappa <= 1.0:
            raise ConfigError(f"kappa out of (0,1]: {self.kappa}")

    # -- derived workload -------------------------------------------------

    def location_update_rate(self) -> float:
        """Location updates generated per second in one registration area.

        Boundary-crossing rate of a two-speed-class population:
        rho * L * (v1*r1 + v2*r2) / (3600*pi).
        """
        return (self.density * self.boundary_km
                * (self.v1 * self.r1 + self.v2 * self.r2)) / (3600.0 * math.pi)

    def call_origination_rate(self) -> float:
        """Calls originated per second in one registration area: rho*xi*A/3600."""
        return self.density * self.call_rate_per_hr * self.area_km2 / 3600.0

    def workload(self) -> "WorkloadRates":
        return WorkloadRates(self.location_update_rate(), self.call_origination_rate())

    def with_density(self, density: float) -> "SystemParams":
        """Copy with a different user density (used by sweeps)."""
        return replace(self, density=density)

    def phi(self, level: int) -> int:
        return (self.phi0, self.phi1, self.phi2)[level]

    # -- serialization ----------------------------------------------------

    def to_config_text(self) -> str:
        """Emit a config file that round-trips to an equal SystemParams."""
        lines = ["# locdb configuration (auto-generated)"]
        for key, attr in _KEY_TO_FIELD.items():
            value = getattr(self, attr)
            value = _to_config_units(key, value)
            lines.append(f"{key} = {value!r}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class WorkloadRates:
    """Per-registration-area event rates, events/second."""

    lambda_u: float   # location updates
    lambda_c: float   # call originations

    def __post_init__(self) -> None:
        if self.lambda_u < 0 or self.lambda_c < 0:
            raise ConfigError("workload rates must be non-negative")


def arrival_rates(p: SystemParams, w: WorkloadRates) -> tuple[float, float, float]:
    """Arrival rates (per second) seen by the DB0, one DB1, and one DB2.

    Each update touches both the old and new leaf databases and climbs as
    far up the tree as the move class requires; each call touches the
    caller and callee sides.  Aggregating those access counts over the
    areas a database serves gives:

      lambda0 = n0 * [(2*q0 + q1)*lu + (2*p0 + p1)*lc]
      lambda1 = n1 * [(1 + q0 + q1)*lu + (2*p0 + 2*p1 + p2)*lc]
      lambda2 = 2*lu + (1 + p0 + p1 + p2)*lc
    """
    lu, lc = w.lambda_u, w.lambda_c
    lam0 = p.n0 * ((2 * p.q0 + p.q1) * lu + (2 * p.p0 + p.p1) * lc)
    lam1 = p.n1 * ((1 + p.q0 + p.q1) * lu + (2 * p.p0 + 2 * p.p1 + p.p2) * lc)
    lam2 = 2 * lu + (1 + p.p0 + p.p1 + p.p2) * lc
    return lam0, lam1, lam2


# ---------------------------------------------------------------------------
# Config file format: `key = value` lines, `#` comments, UTF-8.
# Keys use conventional units (km, hr, us, ms); values are converted to the
# internal units at load time.
# ---------------------------------------------------------------------------

_KEY_TO_FIELD = {
    "n0": "n0", "n1": "n1",
    "r1": "r1", "r2": "r2",
    "v1_kmh": "v1", "v2_kmh": "v2",
    "L_km": "boundary_km", "A_km2": "area_km2",
    "xi_per_hr": "call_rate_per_hr",
    "rho_users_per_km2": "density",
    "q0": "q0", "q1": "q1",
    "p0": "p0", "p1": "p1", "p2": "p2",
    "Nt": "nt", "Y1": "y1", "Y2": "y2", "kappa": "kappa",
    "Ts_us": "ts", "Tb_ms": "tb", "Tc_us": "tc",
    "c1": "c1", "c2": "c2", "c3": "c3", "c4": "c4",
    "Ei_bytes": "entry_bytes", "M_bytes": "profile_bytes",
    "a1_bytes": "a1_bytes", "a2_bytes": "a2_bytes",
    "Phi0_bytes": "phi0", "Phi1_bytes": "phi1", "Phi2_bytes": "phi2",
}

# Bare symbol names accepted as shorthand for the unit-suffixed keys.
_ALIASES = {
    "v1": "v1_kmh", "v2": "v2_kmh", "L": "L_km", "A": "A_km2",
    "xi": "xi_per_hr", "rho": "rho_users_per_km2",
    "Ts": "Ts_us", "Tb": "Tb_ms", "Tc": "Tc_us",
    "Ei": "Ei_bytes", "M": "M_bytes", "a1": "a1_bytes", "a2": "a2_bytes",
    "Phi0": "Phi0_bytes", "Phi1": "Phi1_bytes", "Phi2": "Phi2_bytes",
}

_INT_FIELDS = {"n0", "n1", "nt", "y1", "y2", "entry_bytes", "profile_bytes",
               "a1_bytes", "a2_bytes", "phi0", "phi1", "phi2"}

# unit scale applied when loading (config value * scale = internal value)
_UNIT_SCALE = {"Ts_us": 1e-6, "Tc_us": 1e-6, "Tb_ms": 1e-3}


def _to_config_units(key: str, value):
    scale = _UNIT_SCALE.get(key)
    if scale is None:
        return value
    # pick a config-units float whose load-time conversion (multiply by
    # scale) reproduces the internal value bit-for-bit
    c = value / scale
    if c * scale == value:
        return c
    for candidate in (math.nextafter(c, math.inf), math.nextafter(c, -math.inf)):
        if candidate * scale == value:
            return candidate
    return c


def parse_config_text(text: str, source: str = "<string>") -> SystemParams:
    """Parse `key = value` config text into a validated SystemParams."""
    overrides: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        key = _ALIASES.get(key, key)
        field_name = _KEY_TO_FIELD.get(key)
        if field_name is None:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        try:
            if field_name in _INT_FIELDS:
                parsed: object = int(float(value))
            else:
                parsed = float(value)
        except ValueError as exc:
            raise ConfigError(f"{source}:{lineno}: bad value for {key}: {value!r}") from exc
        if field_name not in _INT_FIELDS:
            parsed = parsed * _UNIT_SCALE.get(key, 1.0)
        overrides[field_name] = parsed
    return SystemParams(**overrides)


def load_config(path: str | Path) -> SystemParams:
    """Load a config file; missing keys fall back to the built-in defaults."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    return parse_config_text(path.read_text(encoding="utf-8"), source=str(path))
