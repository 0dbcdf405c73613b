"""Small dense linear-algebra helpers shared across the solver."""

import numpy as np

__all__ = ["truncate_top", "top_norm", "spectral_norm"]


def truncate_top(j, z):
    """Keep the j entries of z with largest magnitude, zero out the rest.

    Ties in magnitude are broken toward the smaller index so the result is
    deterministic.  j <= 0 gives the zero vector, j >= z.size a copy of z.
    """
    z = np.asarray(z, dtype=float)
    if j >= z.size:
        return z.copy()
    out = np.zeros_like(z)
    if j <= 0:
        return out
    # stable argsort on -|z|: equal magnitudes keep their original order
    keep = np.argsort(-np.abs(z), kind="stable")[:j]
    out[keep] = z[keep]
    return out


def top_norm(j, z):
    """Euclidean norm of the j largest-magnitude entries of z."""
    z = np.asarray(z, dtype=float)
    if j <= 0 or z.size == 0:
        return 0.0
    if j >= z.size:
        return float(np.linalg.norm(z))
    a = np.abs(z)
    top = np.partition(a, z.size - j)[z.size - j:]
    return float(np.linalg.norm(top))


def spectral_norm(A, tol=1e-10, max_iter=10_000):
    """Largest singular value of A by power iteration on A^T A.

    Starts from the normalized all-ones vector (deterministic) and stops when
    the estimate's relative change drops below tol.  If the start vector is
    annihilated by A, it is re-drawn from a fixed-seed generator.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    n, d = A.shape
    if A.size == 0 or not np.any(A):
        return 0.0
    v = np.full(d, 1.0 / np.sqrt(d))
    sigma = 0.0
    for _ in range(max_iter):
        w = A @ v
        nw = np.linalg.norm(w)
        if nw == 0.0:
            # all-ones start lies in the nullspace; deterministic re-draw
            v = np.random.default_rng(0).standard_normal(d)
            v /= np.linalg.norm(v)
            continue
        new_sigma = nw
        u = A.T @ w
        nu = np.linalg.norm(u)
        if nu == 0.0:
            return float(new_sigma)
        v = u / nu
        if abs(new_sigma - sigma) <= tol * max(new_sigma, 1e-300):
            return float(new_sigma)
        sigma = new_sigma
    return float(sigma)
