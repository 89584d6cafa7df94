"""Hot numeric kernels: single-queue waiting times and the event loop.

Both kernels are plain Python over numpy arrays so the same source runs
compiled (numba ``@njit``, the default) or interpreted (``LOCDB_NUMBA=0``).
The waiting-time recursion additionally has a vectorized pure-numpy form
used as the fallback binding, since it is algebraically identical and far
faster than the interpreted loop.

``benchmarks/kernel_bench.py`` times the compiled and fallback paths
against each other.
"""

from __future__ import annotations

import numpy as np

from locdb._accel import maybe_jit, numba_enabled

__all__ = [
    "lindley_waits",
    "lindley_waits_loop",
    "lindley_waits_vectorized",
    "hierarchy_event_loop",
]


def _lindley_waits_loop(gaps: np.ndarray, services: np.ndarray) -> np.ndarray:
    """Waiting time of each customer in a FCFS single-server queue.

    ``gaps[i]`` is the interarrival time between customers i-1 and i
    (``gaps[0]`` is ignored); ``services[i]`` is customer i's service
    time.  W_0 = 0 and W_i = max(0, W_{i-1} + S_{i-1} - A_i).
    """
    n = services.shape[0]
    waits = np.empty(n, np.float64)
    waits[0] = 0.0
    prev = 0.0
    for i in range(1, n):
        v = prev + services[i - 1] - gaps[i]
        prev = v if v > 0.0 else 0.0
        waits[i] = prev
    return waits


def lindley_waits_vectorized(gaps: np.ndarray, services: np.ndarray) -> np.ndarray:
    """Same recursion in closed form: W_n = U_n - min_{j<=n} U_j where
    U is the running sum of (service - gap) increments.
    """
    n = services.shape[0]
    u = np.empty(n, np.float64)
    u[0] = 0.0
    np.cumsum(services[:-1] - gaps[1:], out=u[1:])
    return u - np.minimum.accumulate(u)


lindley_waits_loop = maybe_jit(_lindley_waits_loop)

if numba_enabled():
    lindley_waits = lindley_waits_loop
else:
    lindley_waits = lindley_waits_vectorized


def _hierarchy_event_loop(arrival, flow_type, acc_offset, acc_count,
                          acc_level, acc_node, acc_service,
                          n_nodes, warmup_t,
                          enq_out, start_out, fin_out):
    """Drive all flows through the per-database FCFS queues.

    A *flow* is one update or call event; it performs its database
    accesses strictly in sequence, each access queueing FCFS at its target
    node.  Because accesses are processed in global enqueue-time order,
    each node's queue reduces to a free-time recursion:
    start = max(enqueue, node_free), finish = start + service.

    Inputs are flat pre-generated arrays: ``arrival`` must be sorted;
    flow ``f`` owns accesses ``acc_offset[f] .. acc_offset[f]+acc_count[f]``.
    Pass zero-length trace arrays to skip per-access timestamp recording.

    Returns post-warm-up accumulators: per-level response sum / sum of
    squares / count / busy time, per-flow-type total-delay sum / sum of
    squares / count, and the completed-flow count.
    """
    n_flows = arrival.shape[0]
    free = np.zeros(n_nodes, np.float64)
    step = np.zeros(n_flows, np.int32)
    record = enq_out.shape[0] > 0

    cap = 1024
    heap_t = np.empty(cap, np.float64)
    heap_f = np.empty(cap, np.int64)
    heap_n = 0

    resp_sum = np.zeros(3, np.float64)
    resp_sumsq = np.zeros(3, np.float64)
    resp_cnt = np.zeros(3, np.int64)
    busy = np.zeros(3, np.float64)
    flow_sum = np.zeros(2, np.float64)
    flow_sumsq = np.zeros(2, np.float64)
    flow_cnt = np.zeros(2, np.int64)
    completed = 0

    i = 0
    while i < n_flows or heap_n > 0:
        if heap_n == 0 or (i < n_flows and arrival[i] <= heap_t[0]):
            t = arrival[i]
            f = i
            i += 1
        else:
            t = heap_t[0]
            f = heap_f[0]
            heap_n -= 1
            if heap_n > 0:
                last_t = heap_t[heap_n]
                last_f = heap_f[heap_n]
                pos = 0
                while True:
                    child = 2 * pos + 1
                    if child >= heap_n:
                        break
                    if child + 1 < heap_n and heap_t[child + 1] < heap_t[child]:
                        child += 1
                    if heap_t[child] < last_t:
                        heap_t[pos] = heap_t[child]
                        heap_f[pos] = heap_f[child]
                        pos = child
                    else:
                        break
                heap_t[pos] = last_t
                heap_f[pos] = last_f

        s = step[f]
        idx = acc_offset[f] + s
        node = acc_node[idx]
        lvl = acc_level[idx]
        svc = acc_service[idx]
        begin = t if t > free[node] else free[node]
        finish = begin + svc
        free[node] = finish
        if record:
            enq_out[idx] = t
            start_out[idx] = begin
            fin_out[idx] = finish
        if t >= warmup_t:
            resp = finish - t
            resp_sum[lvl] += resp
            resp_sumsq[lvl] += resp * resp
            resp_cnt[lvl] += 1
            busy[lvl] += svc

        step[f] = s + 1
        if s + 1 < acc_count[f]:
            if heap_n == cap:
                new_cap = cap * 2
                new_t = np.empty(new_cap, np.float64)
                new_f = np.empty(new_cap, np.int64)
                new_t[:cap] = heap_t
                new_f[:cap] = heap_f
                heap_t = new_t
                heap_f = new_f
                cap = new_cap
            pos = heap_n
            heap_n += 1
            while pos > 0:
                parent = (pos - 1) // 2
                if heap_t[parent] > finish:
                    heap_t[pos] = heap_t[parent]
                    heap_f[pos] = heap_f[parent]
                    pos = parent
                else:
                    break
            heap_t[pos] = finish
            heap_f[pos] = f
        else:
            completed += 1
            if arrival[f] >= warmup_t:
                total = finish - arrival[f]
                ft = flow_type[f]
                flow_sum[ft] += total
                flow_sumsq[ft] += total * total
                flow_cnt[ft] += 1

    return (resp_sum, resp_sumsq, resp_cnt, busy,
            flow_sum, flow_sumsq, flow_cnt, completed)


hierarchy_event_loop = maybe_jit(_hierarchy_event_loop)
