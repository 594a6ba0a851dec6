"""Edge-weight index algebra and the Laplacian / adjacency linear operators.

A graph on ``p`` nodes is parameterised by a non-negative weight vector of
length ``m = p(p-1)/2``.  Entry ``k`` (1-based) belongs to the node pair
``(i, j)`` with ``i > j`` and ``k = i - j + (j-1)(2p-j)/2``, i.e. the lower
triangle is read column by column.  Internally everything is 0-based and goes
through :class:`EdgeIndexMap`; the 1-based helpers exist for documentation and
for edge-list export.
"""

from functools import lru_cache

import numpy as np

__all__ = [
    "EdgeIndexMap",
    "StructureError",
    "n_edges",
    "n_nodes",
    "as_weights",
    "lap_apply",
    "lap_adjoint",
    "adj_apply",
    "adj_adjoint",
    "lap_inverse",
    "lap_gram_apply",
    "adj_gram_apply",
    "operator_norms",
]


class StructureError(ValueError):
    """Raised when an array does not have the shape an operator expects."""


def n_edges(p):
    """Number of node pairs ``p(p-1)/2``."""
    return p * (p - 1) // 2


def n_nodes(m):
    """Invert ``m = p(p-1)/2``; raises if ``m`` is not a triangular number."""
    p = int(round((1 + np.sqrt(1 + 8 * m)) / 2))
    if n_edges(p) != m or p < 2:
        raise StructureError(f"length {m} is not p(p-1)/2 for any p >= 2")
    return p


class EdgeIndexMap:
    """Bijection between node pairs and positions in the weight vector.

    Parameters
    ----------
    p : int
        Number of nodes, ``p >= 2``.

    Attributes
    ----------
    rows, cols : ndarray of int, shape (m,)
        0-based endpoints of every edge slot; ``rows[k] < cols[k]``.  In the
        1-based lower-triangle convention slot ``k`` is the pair
        ``(i, j) = (cols[k] + 1, rows[k] + 1)``.
    """

    def __init__(self, p):
        p = int(p)
        if p < 2:
            raise StructureError(f"need at least 2 nodes, got p={p}")
        self.p = p
        self.m = n_edges(p)
        # np.triu_indices enumerates (j, i), j < i, row by row, which is the
        # column-by-column order of the lower triangle.
        self.rows, self.cols = _triu(p)

    def index(self, i, j):
        """1-based slot ``k`` of the 1-based pair ``(i, j)``, order free."""
        i, j = max(i, j), min(i, j)
        if not (1 <= j < i <= self.p):
            raise StructureError(f"({i}, {j}) is not a node pair for p={self.p}")
        return i - j + (j - 1) * (2 * self.p - j) // 2

    def pair(self, k):
        """1-based pair ``(i, j)``, ``i > j``, of the 1-based slot ``k``."""
        if not (1 <= k <= self.m):
            raise StructureError(f"slot {k} out of range 1..{self.m}")
        return int(self.cols[k - 1]) + 1, int(self.rows[k - 1]) + 1

    def __repr__(self):
        return f"EdgeIndexMap(p={self.p})"


@lru_cache(maxsize=64)
def _triu(p):
    r, c = np.triu_indices(p, k=1)
    r.setflags(write=False)
    c.setflags(write=False)
    return r, c


def as_weights(w, p=None):
    """Validate a weight vector and return ``(w, p)``.

    Only the shape is checked; non-negativity is a property of the iterates,
    not something the linear operators require.
    """
    w = np.asarray(w, dtype=float)
    if w.ndim != 1:
        raise StructureError(f"weight vector must be 1-D, got shape {w.shape}")
    if p is None:
        p = n_nodes(w.size)
    elif w.size != n_edges(p):
        raise StructureError(f"expected {n_edges(p)} weights for p={p}, got {w.size}")
    return w, p


def _square(Y):
    Y = np.asarray(Y, dtype=float)
    if Y.ndim != 2 or Y.shape[0] != Y.shape[1]:
        raise StructureError(f"expected a square matrix, got shape {Y.shape}")
    return Y


def lap_apply(w, p=None):
    """Laplacian ``Lw``: off-diagonal ``-w`` and zero row sums.

    Parameters
    ----------
    w : array_like, shape (p(p-1)/2,)
    p : int, optional
        Node count; inferred from ``len(w)`` when omitted.

    Returns
    -------
    ndarray, shape (p, p)
    """
    w, p = as_weights(w, p)
    r, c = _triu(p)
    L = np.zeros((p, p))
    L[r, c] = -w
    L[c, r] = -w
    L[np.diag_indices(p)] = -L.sum(axis=1)
    return L


def lap_adjoint(Y):
    """Adjoint ``L*Y``: slot ``k`` of pair (i, j) is ``y_ii - y_ij - y_ji + y_jj``."""
    Y = _square(Y)
    r, c = _triu(Y.shape[0])
    d = np.diagonal(Y)
    return d[r] + d[c] - Y[r, c] - Y[c, r]


def adj_apply(w, p=None):
    """Adjacency ``Aw``: off-diagonal ``+w``, zero diagonal."""
    w, p = as_weights(w, p)
    r, c = _triu(p)
    A = np.zeros((p, p))
    A[r, c] = w
    A[c, r] = w
    return A


def adj_adjoint(Y):
    """Adjoint ``A*Y``: slot ``k`` of pair (i, j) is ``y_ij + y_ji``."""
    Y = _square(Y)
    r, c = _triu(Y.shape[0])
    return Y[r, c] + Y[c, r]


def lap_inverse(Theta):
    """Edge weights read off a Laplacian-like matrix, ``-Theta_ij`` for i < j.

    This is a left inverse of :func:`lap_apply` (no clipping is done).
    """
    Theta = _square(Theta)
    r, c = _triu(Theta.shape[0])
    return -0.5 * (Theta[r, c] + Theta[c, r])


def lap_gram_apply(w, p=None):
    """``L*(Lw)`` without forming the m x m matrix."""
    w, p = as_weights(w, p)
    r, c = _triu(p)
    deg = np.bincount(r, w, minlength=p) + np.bincount(c, w, minlength=p)
    return deg[r] + deg[c] + 2.0 * w


def adj_gram_apply(w, p=None):
    """``A*(Aw)``, which is simply ``2w``."""
    w, _ = as_weights(w, p)
    return 2.0 * w


def operator_norms(p):
    """Operator norms ``(||L||, ||A||) = (sqrt(2p), sqrt(2))``.

    The squares are the Lipschitz constants of the quadratic parts of the
    weight subproblems.
    """
    if p < 2:
        raise StructureError(f"need at least 2 nodes, got p={p}")
    return float(np.sqrt(2 * p)), float(np.sqrt(2.0))
