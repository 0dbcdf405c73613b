"""Proximal operator of the squared top-k l2-norm.

prox_topk_sq computes argmin_x { (mu/2) ||x||_{k,2}^2 + (1/2) ||x - v||^2 }
where ||x||_{k,2} is the l2-norm of the k largest-magnitude entries.  The
minimizer, expressed on |v| sorted non-increasingly, shrinks a leading block
by 1/(1+mu), keeps a trailing block unchanged, and is constant equal to some
xi on a middle block straddling position k.  The scan below locates that
block by examining at most d candidate (j_start, j_end) pairs.

prox_topk_sq_conjugate gives the prox of alpha * h* for h = (1/(2 lam)) *
||.||_{k,2}^2, the form needed by the dual solver's primal update, via
Moreau's identity.
"""

import numpy as np

__all__ = ["prox_topk_sq", "prox_topk_sq_conjugate"]


def prox_topk_sq(mu, k, v, with_count=False):
    """Prox of (mu/2)||.||_{k,2}^2 at v.

    Parameters
    ----------
    mu : positive shrinkage weight.
    k : number of entries the norm covers; k <= 0 returns v unchanged,
        k > v.size is treated as v.size.
    v : 1-D array.
    with_count : also return the number of candidate triplets examined
        (always <= v.size; the basis of the linear-time bound).
    """
    v = np.asarray(v, dtype=float)
    d = v.size
    if mu <= 0:
        raise ValueError("mu must be positive")
    if k <= 0:
        out = v.copy()
        return (out, 0) if with_count else out
    k = min(int(k), d)

    signs = np.where(v >= 0, 1.0, -1.0)
    order = np.argsort(-np.abs(v), kind="stable")
    u = np.abs(v)[order]  # non-increasing, ties keep original index order

    # 1-based views with sentinels: U[i] = u_i (U[d+1] = 0), Ubar[i] = u_i/(1+mu)
    # for i in [k], Ubar[0] = +inf
    U = np.concatenate(([np.inf], u, [0.0]))
    Ubar = np.concatenate(([np.inf], u[:k] / (1.0 + mu)))

    if Ubar[k] >= U[k + 1]:
        # shrink-top branch: blocks don't interact
        x_sorted = np.concatenate((Ubar[1:], u[k:]))
        out = np.empty(d)
        out[order] = x_sorted
        out *= signs
        return (out, 0) if with_count else out

    # prefix sums over the 1-based u and ubar grids for O(1) candidate cost
    cum_u = np.concatenate(([0.0], np.cumsum(u)))
    cum_u2 = np.concatenate(([0.0], np.cumsum(u * u)))
    ub = Ubar[1:]
    cum_ub = np.concatenate(([0.0], np.cumsum(ub)))
    cum_ub2 = np.concatenate(([0.0], np.cumsum(ub * ub)))

    def g_value(js, je, xi):
        # (1+mu) sum_{i=js}^{k} (xi - ubar_i)^2 + sum_{i=k+1}^{je} (xi - u_i)^2
        m1 = k - js + 1
        s1 = cum_ub[k] - cum_ub[js - 1]
        q1 = cum_ub2[k] - cum_ub2[js - 1]
        total = (1.0 + mu) * (m1 * xi * xi - 2.0 * xi * s1 + q1)
        if je > k:
            m2 = je - k
            s2 = cum_u[je] - cum_u[k]
            q2 = cum_u2[je] - cum_u2[k]
            total += m2 * xi * xi - 2.0 * xi * s2 + q2
        return total

    j_hat = k
    g_min = np.inf
    best = None
    count = 0
    e = k - 1  # last index known to satisfy u_j > current threshold
    for js in range(1, k + 1):
        thresh = Ubar[js]
        # endpoints: {j : u_j > ubar_js and j >= j_hat}; u non-increasing, so
        # the threshold set is a prefix whose end e only moves right as js grows
        while e + 1 <= d and U[e + 1] > thresh:
            e += 1
        if e < j_hat:
            continue
        for je in range(j_hat, e + 1):
            count += 1
            xi_free = (cum_u[je] - cum_u[js - 1]) / (mu * (k - js + 1) + je - js + 1)
            xi = min(Ubar[js - 1], max(U[je + 1], xi_free))
            g = g_value(js, je, xi)
            if g < g_min:
                g_min = g
                best = (js, je, xi)
        j_hat = e
    assert count <= d, "candidate scan exceeded the linear bound"
    assert best is not None

    js, je, xi = best
    x_sorted = np.concatenate((Ubar[1:js], np.full(je - js + 1, xi), u[je:]))
    out = np.empty(d)
    out[order] = x_sorted
    out *= signs
    return (out, count) if with_count else out


def prox_topk_sq_conjugate(alpha, k, v, lam):
    """Prox of alpha * h* at v, where h = (1/(2 lam)) ||.||_{k,2}^2.

    Moreau: prox_{alpha h*}(v) = v - alpha * prox_{h / alpha}(v / alpha),
    and h/alpha has shrinkage weight mu = 1/(lam * alpha).
    """
    if alpha <= 0 or lam <= 0:
        raise ValueError("alpha and lam must be positive")
    v = np.asarray(v, dtype=float)
    if k <= 0:
        # h = 0, conjugate is the indicator of {0}: prox is the zero map...
        # not needed by the solver (k - s >= 1 in the dual regime); keep the
        # Moreau formula's limit, which collapses to v - v = 0
        return np.zeros_like(v)
    return v - alpha * prox_topk_sq(1.0 / (lam * alpha), k, v / alpha)
