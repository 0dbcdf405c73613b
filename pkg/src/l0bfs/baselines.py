"""Inexact reference methods: greedy selection and hard thresholding.

All three return a SolveReport whose solver_calls is 1: inexact methods
count as a single bound-computation unit when compared against the search,
regardless of how many restricted solves they perform internally.
"""

import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .linalg import truncate_top
from .restricted import solve_restricted
from .search import SolveReport

__all__ = ["BaselineConfig", "omp", "iht", "htp"]


@dataclass(frozen=True)
class BaselineConfig:
    step_size: Optional[float] = None  # None: 1 / (||A||^2 / gamma + lam)
    max_iters: int = 1000
    tol: float = 1e-10
    restricted_tol: float = 1e-12

    def __post_init__(self):
        if self.step_size is not None and self.step_size <= 0:
            raise ValueError("step_size must be positive")


def _step(inst, cfg):
    if cfg.step_size is not None:
        return cfg.step_size
    # exact inverse Lipschitz constant of grad P
    return 1.0 / (inst.op_norm ** 2 / inst.loss.gamma + inst.lam)


def _report(sol, t0, converged=True):
    return SolveReport(x=sol.x, objective=sol.value, solver_calls=1, pruned=0,
                       heap_peak=0, wall_time=time.perf_counter() - t0,
                       delta=0.0, converged=converged)


def omp(inst, cfg=None):
    """Orthogonal matching pursuit: k rounds of pick-largest-gradient + re-solve."""
    cfg = cfg or BaselineConfig()
    t0 = time.perf_counter()
    chosen = []
    x = np.zeros(inst.d)
    sol = None
    for _ in range(inst.k):
        score = np.abs(inst.objective_grad(x))
        score[chosen] = -np.inf  # never re-pick; ties go to the smallest index
        chosen.append(int(np.argmax(score)))
        sol = solve_restricted(inst, chosen, cfg.restricted_tol)
        x = sol.x
    return _report(sol, t0)


def iht(inst, cfg=None, x0=None):
    """Iterative hard thresholding with a terminal restricted polish.

    Stops once the support repeats and the iterate has stopped moving
    (within cfg.tol), i.e. a thresholded fixed point; hitting max_iters
    instead is reported via converged=False.  x0 defaults to zero.
    """
    cfg = cfg or BaselineConfig()
    t0 = time.perf_counter()
    step = _step(inst, cfg)
    x = np.zeros(inst.d) if x0 is None else np.array(x0, dtype=float)
    support = None
    converged = False
    for _ in range(cfg.max_iters):
        x_new = truncate_top(inst.k, x - step * inst.objective_grad(x))
        new_support = tuple(np.flatnonzero(x_new))
        if new_support == support and np.max(np.abs(x_new - x)) <= cfg.tol:
            x = x_new
            converged = True
            break
        support, x = new_support, x_new
    sol = solve_restricted(inst, np.flatnonzero(x), cfg.restricted_tol)
    return _report(sol, t0, converged)


def htp(inst, cfg=None, x0=None):
    """Hard thresholding pursuit: IHT step + restricted solve every iteration.

    The support sequence either reaches a fixed point (converged) or cycles;
    cycles and the iteration cap return the best visited solution with
    converged=False.  x0 defaults to zero.
    """
    cfg = cfg or BaselineConfig()
    t0 = time.perf_counter()
    step = _step(inst, cfg)
    x = np.zeros(inst.d) if x0 is None else np.array(x0, dtype=float)
    prev = None
    seen = set()
    best = None
    converged = False
    for _ in range(cfg.max_iters):
        z = x - step * inst.objective_grad(x)
        support = tuple(np.flatnonzero(truncate_top(inst.k, z)))
        sol = solve_restricted(inst, support, cfg.restricted_tol)
        if best is None or sol.value < best.value:
            best = sol
        if support == prev:
            converged = True
            break
        if support in seen:
            break  # cycle
        seen.add(support)
        prev = support
        x = sol.x
    return _report(best, t0, converged)
