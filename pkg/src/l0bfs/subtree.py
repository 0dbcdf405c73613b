"""Per-node lower bounds and candidates for the best-first search.

subtree_solve returns, for a tree node S, a lower bound on the best
objective over the subtree below S together with a feasible candidate:

  * |S| = k: the restricted solve on S is the subtree minimum (leaf).
  * |S| + |open tail| <= k: the restricted solve on S union tail is exact.
  * otherwise: maximize the concave dual lower bound

        D(beta; S) = -L*(beta) - (1/(2 lam)) ||A_S^T beta||^2
                     - (1/(2 lam)) ||A_tail^T beta||_{k-s,2}^2,

    which under-estimates the subtree minimum for every beta (Fenchel-Young
    applied to L, then minimizing the linearized objective over supports
    reachable below S).

Two dual maximizers are provided: a primal-dual iteration with linesearch
(pdal_maximize) and projected supergradient ascent with step backtracking
(sga_maximize).  Both support warm starting from the parent's final state
and early termination ("pruning") as soon as some D value exceeds the
incumbent objective, which certifies the subtree cannot win.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .linalg import top_norm, truncate_top
from .restricted import ConvergenceError, solve_restricted
from .topk_prox import prox_topk_sq_conjugate

__all__ = [
    "EXACT", "DUAL_BOUND", "PRUNED",
    "SolverConfig", "DualState", "SgaState", "BoundResult",
    "dual_value", "pdal_maximize", "sga_maximize", "subtree_solve",
    "pdal_root_state", "sga_root_state",
]

EXACT = "exact"
DUAL_BOUND = "dual_bound"
PRUNED = "pruned"


@dataclass(frozen=True)
class SolverConfig:
    """Knobs for subtree_solve and the search driver.

    epsilon is the relative dual-improvement tolerance (measured against the
    incumbent objective).  gamma overrides the loss's analytic smoothness
    parameter when set; leave None to use it.  zero_tol is the magnitude
    below which differences are treated as zero in prune/termination tests.
    """

    epsilon: float = 1e-5
    subroutine: str = "pdal"  # or "sga"
    max_dual_iters: int = 50_000
    restricted_tol: float = 1e-12
    warm_start: bool = True
    pruning: bool = True
    zero_tol: float = 1e-12
    gamma: Optional[float] = None

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.subroutine not in ("pdal", "sga"):
            raise ValueError("subroutine must be 'pdal' or 'sga'")


@dataclass(frozen=True)
class DualState:
    """PDAL iterate carried between parent and child nodes."""

    beta: np.ndarray  # dual point, length n
    y: np.ndarray     # primal point, length d
    tau: float
    rho: float
    theta: float = 1.0


@dataclass(frozen=True)
class SgaState:
    """Supergradient-ascent iterate: dual point and inherited step size."""

    beta: np.ndarray
    eta: float


@dataclass(frozen=True)
class BoundResult:
    low: float                 # admissible lower bound for the subtree
    x: Optional[np.ndarray]    # feasible candidate (None when pruned early)
    value: float               # P(x), inf when pruned early
    status: str                # EXACT, DUAL_BOUND, or PRUNED
    state: object              # DualState/SgaState for warm-starting children
    iterations: int


def pdal_root_state(inst):
    """Cold start at the tree root: zero iterates, tau = 1/||A||_2, rho = 1."""
    return DualState(
        beta=np.zeros(inst.n), y=np.zeros(inst.d),
        tau=1.0 / inst.op_norm, rho=1.0, theta=1.0,
    )


def sga_root_state(inst):
    return SgaState(beta=np.zeros(inst.n), eta=1.0)


def _penalty(w, node):
    """||w_S||^2 + ||w_tail||_{k-s,2}^2 for w = A^T beta."""
    ws = w[node.support_array]
    rem = node.k - node.size
    return float(ws @ ws) + top_norm(rem, w[node.tail_array]) ** 2


def dual_value(inst, node, beta, w=None):
    """D(beta; node): lower bound on the subtree minimum; -inf off-domain."""
    beta = np.asarray(beta, dtype=float)
    conj = inst.loss.conjugate(beta)
    if not np.isfinite(conj):
        return -np.inf
    if w is None:
        w = inst.AT @ beta
    return -conj - _penalty(w, node) / (2.0 * inst.lam)


def _converged(improve, incumbent, epsilon):
    # relative improvement against the incumbent objective; absolute when the
    # incumbent is not a usable positive scale
    if np.isfinite(incumbent) and incumbent > 0:
        return improve <= epsilon * incumbent
    return improve <= epsilon


def _polish(inst, y_or_x, node, cfg, state, d_max, iterations):
    support = np.flatnonzero(y_or_x)
    sol = solve_restricted(inst, support, cfg.restricted_tol)
    return BoundResult(
        low=d_max, x=sol.x, value=sol.value,
        status=DUAL_BOUND, state=state, iterations=iterations,
    )


def pdal_maximize(inst, node, init, prune_threshold, cfg):
    """Maximize D(.; node) by a primal-dual iteration with linesearch.

    Dual step: beta_t = prox of tau * L* at beta - tau * A y.  Primal step:
    blockwise prox of the support penalty at ybar, where the open-tail block
    is the conjugate prox of the scaled top-(k-s) squared norm.  The step
    sizes follow the acceleration schedule driven by gamma (strong convexity
    of L*), with tau halved until

        sqrt(rho_t) * tau_t * ||A (y_t - y_{t-1})|| <= ||y_t - y_{t-1}||.

    Converged when the D improvement is epsilon-small relative to the
    incumbent AND the current D matches the running max D_max; the returned
    bound is always D_max.  With pruning enabled, returns immediately once
    any D value exceeds prune_threshold.
    """
    A, AT, lam, loss = inst.A, inst.AT, inst.lam, inst.loss
    k, s = node.k, node.size
    rem = k - s
    s_arr, tail = node.support_array, node.tail_array
    gamma = cfg.gamma if cfg.gamma is not None else loss.gamma

    beta = np.array(init.beta, dtype=float)
    y = np.array(init.y, dtype=float)
    tau, rho, theta = float(init.tau), float(init.rho), 1.0

    w = AT @ beta
    d_prev = dual_value(inst, node, beta, w)
    d_max = d_prev
    if cfg.pruning and d_prev > prune_threshold + cfg.zero_tol:
        return BoundResult(low=d_max, x=None, value=np.inf,
                           status=PRUNED, state=None, iterations=0)

    for t in range(1, cfg.max_dual_iters + 1):
        beta_new = loss.prox_conjugate(tau, beta - tau * (A @ y))
        w_new = AT @ beta_new
        d_cur = dual_value(inst, node, beta_new, w_new)
        d_max = max(d_max, d_cur)
        if cfg.pruning and d_cur > prune_threshold + cfg.zero_tol:
            return BoundResult(low=d_max, x=None, value=np.inf,
                               status=PRUNED, state=None, iterations=t)

        rho_new = rho * (1.0 + gamma * tau)
        tau_new = tau * np.sqrt((rho / rho_new) * (1.0 + theta))
        for _ in range(61):  # at most 60 halvings
            theta_new = tau_new / tau
            coef = rho_new * tau_new
            ybar = y + coef * (w_new + theta_new * (w_new - w))
            y_new = np.zeros(inst.d)
            y_new[s_arr] = ybar[s_arr] / (1.0 + lam * coef)
            if tail.size:
                y_new[tail] = prox_topk_sq_conjugate(coef, rem, ybar[tail], lam)
            diff = y_new - y
            nd = np.linalg.norm(diff)
            if np.sqrt(rho_new) * tau_new * np.linalg.norm(A @ diff) <= nd:
                break
            tau_new *= 0.5
        else:
            raise ConvergenceError(
                "primal-dual linesearch failed to pass after 60 halvings")

        if _converged(d_cur - d_prev, prune_threshold, cfg.epsilon) and d_cur >= d_max:
            state = DualState(beta_new, y_new, tau_new, rho_new, theta_new)
            return _polish(inst, truncate_top(k, y_new), node, cfg, state, d_max, t)

        beta, w, y = beta_new, w_new, y_new
        tau, rho, theta, d_prev = tau_new, rho_new, theta_new, d_cur

    # iteration cap: D_max is still a valid bound; polish the last primal point
    state = DualState(beta, y, tau, rho, theta)
    return _polish(inst, truncate_top(k, y), node, cfg, state, d_max,
                   cfg.max_dual_iters)


def _sga_primal(inst, node, w):
    """x~(beta; node) used for the supergradient: blockwise -w/lam, truncated on the tail."""
    x = np.zeros(inst.d)
    x[node.support_array] = w[node.support_array]
    tail = node.tail_array
    if tail.size:
        x[tail] = truncate_top(node.k - node.size, w[tail])
    return x / (-inst.lam)


def sga_maximize(inst, node, init, prune_threshold, cfg):
    """Maximize D(.; node) by projected supergradient ascent.

    Each iteration doubles the previous step then halves it until the dual
    value does not decrease, so the D trace is non-decreasing and low equals
    the final (= maximal) D.  If no step improves (possible at a kink of the
    nonsmooth D), the iterate is kept and the zero improvement triggers the
    convergence test.  The state stores the step that produced the first
    accepted iterate, which is what a warm-started child inherits.
    """
    A, AT = inst.A, inst.AT
    beta = np.array(init.beta, dtype=float)
    eta = float(init.eta)

    w = AT @ beta
    d_prev = dual_value(inst, node, beta, w)
    if cfg.pruning and d_prev > prune_threshold + cfg.zero_tol:
        return BoundResult(low=d_prev, x=None, value=np.inf,
                           status=PRUNED, state=None, iterations=0)

    eta_first = None
    for t in range(1, cfg.max_dual_iters + 1):
        g = A @ _sga_primal(inst, node, w) - inst.loss.conjugate_grad(beta)
        eta_in = eta
        eta *= 2.0
        accepted = False
        for _ in range(100):
            cand = inst.loss.project_domain(beta + eta * g)
            w_cand = inst.AT @ cand
            d_cand = dual_value(inst, node, cand, w_cand)
            if d_cand >= d_prev:
                accepted = True
                break
            eta *= 0.5
        if not accepted:
            # supergradient stall: keep the iterate, improvement is zero
            cand, w_cand, d_cand, eta = beta, w, d_prev, eta_in
        if eta_first is None:
            eta_first = eta

        improve = d_cand - d_prev
        beta, w, d_prev = cand, w_cand, d_cand
        if cfg.pruning and d_prev > prune_threshold + cfg.zero_tol:
            return BoundResult(low=d_prev, x=None, value=np.inf,
                               status=PRUNED, state=None, iterations=t)
        if _converged(improve, prune_threshold, cfg.epsilon):
            state = SgaState(beta, eta_first)
            return _polish(inst, _sga_primal(inst, node, w), node, cfg,
                           state, d_prev, t)

    state = SgaState(beta, eta_first if eta_first is not None else eta)
    return _polish(inst, _sga_primal(inst, node, w), node, cfg, state, d_prev,
                   cfg.max_dual_iters)


def subtree_solve(inst, node, warm=None, prune_threshold=np.inf, cfg=None):
    """Lower bound + feasible candidate for the subtree below node.

    warm is the parent's final DualState/SgaState (ignored when warm
    starting is disabled or the state type does not match cfg.subroutine).
    prune_threshold is the incumbent objective; it also scales the dual
    convergence test, so pass it even when pruning is disabled.
    """
    cfg = cfg or SolverConfig()
    s = node.size

    if s == node.k or s + node.tail_size <= node.k:
        if s == node.k:
            support = node.indices
        else:
            support = node.indices + tuple(node.tail_array)
        sol = solve_restricted(inst, support, cfg.restricted_tol)
        if cfg.pruning and sol.value > prune_threshold + cfg.zero_tol:
            return BoundResult(low=sol.value, x=sol.x, value=sol.value,
                               status=PRUNED, state=None, iterations=0)
        return BoundResult(low=sol.value, x=sol.x, value=sol.value,
                           status=EXACT, state=None, iterations=0)

    if cfg.subroutine == "pdal":
        init = warm if (cfg.warm_start and isinstance(warm, DualState)) \
            else pdal_root_state(inst)
        return pdal_maximize(inst, node, init, prune_threshold, cfg)
    init = warm if (cfg.warm_start and isinstance(warm, SgaState)) \
        else sga_root_state(inst)
    return sga_maximize(inst, node, init, prune_threshold, cfg)
