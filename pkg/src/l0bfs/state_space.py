"""Search tree over candidate supports.

A node is a strictly increasing tuple S of 0-based indices with |S| <= k.
Its children extend S by one index strictly greater than max(S), and a node
is kept only if enough indices remain above max(S) to complete S to size k,
i.e. k - |S| <= d - (max(S) + 1).  Leaves are exactly the size-k supports.
Every index above max(S) is "open" at S: the subtree below S can still use
it.  The tuple (S, open tail) drives the dual bound and the exact branches
of the subtree solver.
"""

from dataclasses import dataclass, field

import numpy as np

__all__ = ["Node", "is_node", "root_node"]


def is_node(indices, d, k):
    """True iff the strictly increasing index tuple is a valid tree node."""
    s = len(indices)
    if s > k:
        return False
    bound = indices[-1] + 1 if s else 0  # first open index
    return k - s <= d - bound


@dataclass(frozen=True)
class Node:
    """A support prefix S in the search tree for dimension d, sparsity k."""

    indices: tuple
    d: int
    k: int
    _arrays: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        object.__setattr__(self, "indices", idx)
        if not (1 <= self.k <= self.d):
            raise ValueError("need 1 <= k <= d")
        if any(i < 0 or i >= self.d for i in idx):
            raise ValueError("indices out of range")
        if any(a >= b for a, b in zip(idx, idx[1:])):
            raise ValueError("indices must be strictly increasing")
        if not is_node(idx, self.d, self.k):
            raise ValueError(f"{idx} is not a valid node for d={self.d}, k={self.k}")

    @property
    def size(self):
        return len(self.indices)

    @property
    def cut(self):
        """First open index: max(S)+1, or 0 at the root."""
        return self.indices[-1] + 1 if self.indices else 0

    @property
    def support_array(self):
        """S as an int array (cached)."""
        if "s" not in self._arrays:
            self._arrays["s"] = np.array(self.indices, dtype=int)
        return self._arrays["s"]

    @property
    def tail_array(self):
        """Open indices {cut, ..., d-1} as an int array (cached)."""
        if "t" not in self._arrays:
            self._arrays["t"] = np.arange(self.cut, self.d)
        return self._arrays["t"]

    @property
    def tail_size(self):
        return self.d - self.cut

    def parent(self):
        if not self.indices:
            raise ValueError("root has no parent")
        return Node(self.indices[:-1], self.d, self.k)

    def children(self):
        """Valid one-index extensions, in increasing order of the new index.

        Adding j leaves d - j - 1 indices open, so j can run only up to
        d - k + |S|; larger j could never be completed to a size-k leaf.
        """
        s = self.size
        if s == self.k:
            return []
        return [
            Node(self.indices + (j,), self.d, self.k)
            for j in range(self.cut, self.d - self.k + s + 1)
        ]

    def covers_support(self, target):
        """True iff some descendant leaf's support contains the target set.

        Equivalent test: every target index below the cut must already be in
        S, and |S union target| <= k (the new indices all lie in the open
        tail, where any <= k - |S| of them can still be added).
        """
        target = set(int(t) for t in target)
        if len(target) > self.k:
            raise ValueError("target support larger than k")
        mine = set(self.indices)
        if any(t < self.cut and t not in mine for t in target):
            return False
        return len(mine | target) <= self.k

    def __str__(self):
        return "{" + ",".join(map(str, self.indices)) + "}"


def root_node(d, k):
    return Node((), d, k)
