"""Best-first search for the cardinality-constrained minimum of P.

bfs_solve keeps a min-heap of tree nodes keyed by their subtree lower
bounds.  Popping the smallest bound and checking the node's own candidate
against it gives a certificate: if P(candidate) <= bound + delta, no
unexplored subtree can beat the candidate by more than delta, so the
candidate is returned (delta = 0 gives the exact minimum up to numeric
tolerance).  Otherwise the node's children are bounded (warm-started from
the parent's dual state), pruned when their bound already exceeds the
incumbent objective, and pushed.

exhaustive_solve is the independent reference: it solves the restricted
problem on every size-k support and keeps the best.
"""

import heapq
import itertools
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .state_space import root_node
from .subtree import PRUNED, SolverConfig, subtree_solve

__all__ = ["SolveReport", "bfs_solve", "exhaustive_solve"]


@dataclass
class SolveReport:
    x: np.ndarray
    objective: float
    solver_calls: int      # subtree bound computations (1 for inexact methods)
    pruned: int
    heap_peak: int
    wall_time: float       # seconds around the solve only
    delta: float
    converged: bool = True
    bound_log: Optional[list] = None  # (indices, low, status, value) per bound

    @property
    def support(self):
        return tuple(int(i) for i in np.flatnonzero(self.x))


def bfs_solve(inst, delta=0.0, cfg=None, record_bounds=False):
    """Search for x with P(x) <= min P + delta over all k-sparse x.

    record_bounds keeps one (node indices, low, status, value) tuple per
    subtree bound computation in the report, for auditing.
    """
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    cfg = cfg or SolverConfig()
    t0 = time.perf_counter()
    log = [] if record_bounds else None

    # feasible incumbent before any bound exists; P(0) also gives the root
    # call a sound prune threshold since every bound sits below the optimum
    x_min = np.zeros(inst.d)
    p_min = inst.objective(x_min)

    root = root_node(inst.d, inst.k)
    res = subtree_solve(inst, root, None, p_min, cfg)
    calls = 1
    if record_bounds:
        log.append((root.indices, res.low, res.status, res.value))
    if res.status == PRUNED:
        # only reachable through float noise: D <= F <= P(0) at the root
        return SolveReport(x=x_min, objective=p_min, solver_calls=calls,
                           pruned=1, heap_peak=0,
                           wall_time=time.perf_counter() - t0, delta=delta,
                           bound_log=log)
    if res.value < p_min:
        x_min, p_min = res.x, res.value

    heap = [(res.low, 0, root, res)]
    seq = 1
    heap_peak = 1
    pruned_count = 0
    while heap:
        low, _, node, res = heapq.heappop(heap)
        if res.value <= low + delta + cfg.zero_tol:
            return SolveReport(x=res.x, objective=res.value,
                               solver_calls=calls, pruned=pruned_count,
                               heap_peak=heap_peak,
                               wall_time=time.perf_counter() - t0,
                               delta=delta, bound_log=log)
        for child in node.children():
            child_res = subtree_solve(inst, child, res.state, p_min, cfg)
            calls += 1
            if record_bounds:
                log.append((child.indices, child_res.low, child_res.status,
                            child_res.value))
            if child_res.status == PRUNED:
                pruned_count += 1
                continue
            heapq.heappush(heap, (child_res.low, seq, child, child_res))
            seq += 1
            heap_peak = max(heap_peak, len(heap))
            if child_res.value < p_min:
                x_min, p_min = child_res.x, child_res.value
    raise AssertionError(
        "heap exhausted before termination; leaf bounds should always fire")


def exhaustive_solve(inst, tol=1e-12):
    """Brute force over all size-k supports via restricted solves."""
    from .restricted import solve_restricted

    t0 = time.perf_counter()
    best = None
    calls = 0
    for support in itertools.combinations(range(inst.d), inst.k):
        sol = solve_restricted(inst, support, tol)
        calls += 1
        if best is None or sol.value < best.value:
            best = sol
    return SolveReport(x=best.x, objective=best.value, solver_calls=calls,
                       pruned=0, heap_peak=0,
                       wall_time=time.perf_counter() - t0, delta=0.0)
