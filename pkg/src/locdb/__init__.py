"""Performance toolkit for hierarchical mobile-network location databases.

The package models a three-level multitree of location databases (a root
DB0 holding all subscriber profiles, mid-level DB1 routers, and leaf DB2
visitor registers), the index structures they run on (T-tree and direct
file), and the workload they see from location updates and call
deliveries.  It provides:

* ``params``   -- system constants, config loading, per-area workload rates
* ``index``    -- T-tree and direct-file indices with instrumented access
                  counting and service-time measurement
* ``analytic`` -- M/G/1 response times (Pollaczek-Khinchine), end-to-end
                  delays, storage feasibility, index selection
* ``desim``    -- discrete-event simulation of the hierarchy plus the
                  classic two-level HLR/VLR call-delivery baseline
* ``overlap``  -- neighbor discovery and handoff management for
                  overlapping network coverage
* ``cli``      -- command-line front end emitting CSV reports

Hot numeric kernels (the event loop and the single-queue waiting-time
recursion) are JIT-compiled with numba by default; set ``LOCDB_NUMBA=0``
to force the pure Python/numpy fallback.
"""

from locdb.params import SystemParams, WorkloadRates, load_config

__all__ = ["SystemParams", "WorkloadRates", "load_config"]

__version__ = "0.1.0"
