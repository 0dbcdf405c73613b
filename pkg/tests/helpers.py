"""Shared oracle machinery for the test suite.

Everything here recomputes quantities through routes independent of the
library implementation: numeric 1-D optimization for conjugates and proxes,
finite differences for gradients, and explicit leaf enumeration for subtree
minima.
"""

import itertools

import numpy as np
from scipy.optimize import minimize_scalar

from l0bfs import Instance, Node, make_loss, solve_restricted


def random_instance(kind, d, k, n, seed, lam=1e-2, delta=1.0):
    """Small random instance built directly, bypassing the generators."""
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((n, d))
    A /= np.linalg.norm(A, axis=0)
    if kind == "logistic":
        b = np.where(rng.random(n) < 0.5, 1.0, -1.0)
    else:
        x = np.zeros(d)
        support = rng.choice(d, size=k, replace=False)
        x[support] = rng.standard_normal(k)
        b = A @ x + 0.1 * rng.standard_normal(n)
    return Instance(A=A, loss=make_loss(kind, b, delta=delta), lam=lam, k=k)


def numeric_conjugate(loss, beta):
    """sup_z <beta, z> - L(z) by per-component bounded 1-D maximization.

    All three losses are separable: L(z) = sum_i l_i(z_i).  Each term
    sup_t (beta_i t - l_i(t)) is computed numerically on L(t e_i), which
    equals l_i(t) + (L(0) - l_i(0)); summing and correcting the repeated
    off-component contributions leaves an (n-1) L(0) offset.  Callers must
    keep beta strictly inside the domain so every maximizer is interior.
    """
    zero = np.zeros(loss.n)
    total = (loss.n - 1) * loss.value(zero)
    for i in range(loss.n):
        def neg(t, i=i):
            z = zero.copy()
            z[i] = t
            return loss.value(z) - beta[i] * t
        res = minimize_scalar(neg, bounds=(-1e4, 1e4), method="bounded",
                              options={"xatol": 1e-10})
        total += -res.fun
    return total


def numeric_prox(loss, tau, v):
    """argmin_y tau*L(y) + 0.5||y - v||^2, componentwise numeric route."""
    out = np.empty(loss.n)
    for i in range(loss.n):
        def obj(yi, i=i):
            y = np.array(v, dtype=float)
            y[i] = yi
            return tau * loss.value(y) + 0.5 * (yi - v[i]) ** 2
        span = abs(tau) + np.abs(v[i]) + 10.0
        res = minimize_scalar(obj, bounds=(v[i] - span, v[i] + span),
                              method="bounded", options={"xatol": 1e-12})
        out[i] = res.x
    return out


def fd_grad(f, z, h=1e-6):
    """Central finite-difference gradient of a scalar function."""
    z = np.asarray(z, dtype=float)
    g = np.empty(z.size)
    for i in range(z.size):
        e = np.zeros(z.size)
        e[i] = h
        g[i] = (f(z + e) - f(z - e)) / (2.0 * h)
    return g


def leaf_values(inst, tol=1e-12):
    """Restricted-solve value of every size-k support, as a dict."""
    out = {}
    for support in itertools.combinations(range(inst.d), inst.k):
        out[support] = solve_restricted(inst, support, tol).value
    return out


def descendant_leaves(node):
    """All size-k supports reachable below the node."""
    need = node.k - node.size
    for extra in itertools.combinations(range(node.cut, node.d), need):
        yield tuple(sorted(node.indices + extra))


def subtree_min(inst, node, leaves=None):
    """F(node): exact minimum over the node's descendant leaves."""
    if leaves is None:
        leaves = leaf_values(inst)
    return min(leaves[s] for s in descendant_leaves(node))


def random_interior_node(rng, d, k):
    """Random valid node with |S| < k and more than k - |S| open indices,
    i.e. one that lands in the dual-bound regime."""
    while True:
        size = int(rng.integers(0, k))
        indices = ()
        cut = 0
        ok = True
        for _ in range(size):
            hi = d - (k - len(indices) - 1) - 1  # leave room to finish
            if cut > hi:
                ok = False
                break
            j = int(rng.integers(cut, hi + 1))
            indices = indices + (j,)
            cut = j + 1
        if not ok:
            continue
        node = Node(indices, d, k)
        if node.size < k and node.size + node.tail_size > k:
            return node


def domain_point(loss, rng, scale=1.0):
    """Random beta strictly inside the conjugate's effective domain."""
    kind = loss.kind
    n = loss.n
    if kind == "quadratic":
        return scale * rng.standard_normal(n)
    if kind == "huber":
        bound = loss.delta / n
        return rng.uniform(-0.95 * bound, 0.95 * bound, size=n)
    # logistic: beta = -s b / n with s strictly inside (0, 1)
    s = rng.uniform(0.05, 0.95, size=n)
    return -s * loss.b / n
