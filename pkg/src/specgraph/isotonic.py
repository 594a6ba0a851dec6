"""Ordered, boxed spectral subproblems.

``reg_isotonic`` solves::

    minimize   -sum(log x_i) + beta/2 * ||x - d||^2
    subject to lower <= x_1 <= x_2 <= ... <= x_q <= upper

by starting from the coordinate-wise minimiser and repeatedly clamping
leading blocks to ``lower``, trailing blocks to ``upper`` and pooling
decreasing runs of adjacent blocks.  A pooled block ``[s, t]`` takes the
value ``(dbar + sqrt(dbar^2 + 4/beta)) / 2`` with ``dbar`` the mean of
``d[s:t+1]``.  Each sweep absorbs at least one free block, so at most ``q``
sweeps run.

``sym_isotonic_psi`` projects onto spectra that are symmetric about the
origin, and ``oracle_solve`` is a slow reference solver for tests.
"""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "DomainError",
    "OrderedBox",
    "reg_isotonic",
    "ls_isotonic",
    "sym_isotonic_psi",
    "kkt_residual",
    "oracle_solve",
]

STRICT_TOL = 1e-12


class DomainError(ValueError):
    """Invalid parameter for an isotonic subproblem."""


@dataclass(frozen=True)
class OrderedBox:
    """Box ``[lower, upper]`` for a monotone vector.

    For Laplacian eigenvalues ``lower`` is the smallest admissible non-zero
    eigenvalue and ``upper`` the largest.  For the positive half of a
    symmetric adjacency spectrum, which is ordered decreasingly, ``upper``
    bounds the first entry and ``lower`` the last.
    """

    lower: float
    upper: float

    def __post_init__(self):
        lo, hi = float(self.lower), float(self.upper)
        if np.isnan(lo) or np.isnan(hi) or lo > hi:
            raise DomainError(f"invalid box [{self.lower}, {self.upper}]")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)


def _log_block(dbar, beta):
    # Root of -1/x + beta*(x - dbar) = 0; the second form avoids
    # cancellation when dbar is large and negative.  Works elementwise.
    dbar = np.asarray(dbar, dtype=float)
    root = np.sqrt(dbar * dbar + 4.0 / beta)
    pos = np.maximum(dbar, 0.0)
    neg = np.minimum(dbar, 0.0)
    out = np.where(dbar >= 0, 0.5 * (pos + root), (2.0 / beta) / (root - neg))
    return out if out.ndim else float(out)


def _gt(a, b):
    """``a > b`` beyond a relative tolerance of ``STRICT_TOL``."""
    return a - b > STRICT_TOL * max(1.0, abs(a), abs(b))


class _Block:
    __slots__ = ("start", "stop", "dsum", "value", "state")

    def __init__(self, start, stop, dsum, value, state="free"):
        self.start, self.stop, self.dsum = start, stop, dsum
        self.value, self.state = value, state

    @property
    def size(self):
        return self.stop - self.start


def _feasible(blocks, lower, upper):
    if _gt(lower, blocks[0].value) or _gt(blocks[-1].value, upper):
        return False
    return not any(_gt(a.value, b.value) for a, b in zip(blocks, blocks[1:]))


def _merge(run, value, state):
    return _Block(run[0].start, run[-1].stop, sum(b.dsum for b in run), value, state)


def _pool(d, block_value, lower, upper):
    """Clamp-and-pool sweeps.  Returns ``(x, sweeps)``."""
    x0 = np.asarray(block_value(d), dtype=float)
    scale = STRICT_TOL * np.maximum(1.0, np.abs(x0))
    if x0.size == 0 or (
        np.all(np.diff(x0) >= -scale[1:]) and x0[0] >= lower - scale[0] and x0[-1] <= upper + scale[-1]
    ):
        return np.maximum.accumulate(np.clip(x0, lower, upper)), 0
    blocks = [_Block(i, i + 1, float(di), block_value(float(di))) for i, di in enumerate(d)]
    sweeps = 0
    while blocks and not _feasible(blocks, lower, upper):
        sweeps += 1

        # Situation 1: lower >= v_1 >= ... >= v_r, not all equal -> clamp at lower.
        r, prev, strict = 0, lower, False
        while r < len(blocks) and not _gt(blocks[r].value, prev):
            strict = strict or _gt(prev, blocks[r].value)
            prev = blocks[r].value
            r += 1
        if r and strict:
            blocks = [_merge(blocks[:r], lower, "low")] + blocks[r:]

        # Situation 2: v_s >= ... >= v_q >= upper, not all equal -> clamp at upper.
        s, prev, strict = len(blocks), upper, False
        while s > 0 and not _gt(prev, blocks[s - 1].value):
            strict = strict or _gt(blocks[s - 1].value, prev)
            prev = blocks[s - 1].value
            s -= 1
        if s < len(blocks) and strict:
            blocks = blocks[:s] + [_merge(blocks[s:], upper, "high")]

        # Situation 3: pool every maximal non-increasing run of free blocks
        # that contains a strict decrease.
        pooled, i = [], 0
        while i < len(blocks):
            j, strict = i + 1, False
            if blocks[i].state == "free":
                while (
                    j < len(blocks)
                    and blocks[j].state == "free"
                    and not _gt(blocks[j].value, blocks[j - 1].value)
                ):
                    strict = strict or _gt(blocks[j - 1].value, blocks[j].value)
                    j += 1
            if strict:
                run = blocks[i:j]
                merged = _merge(run, 0.0, "free")
                merged.value = block_value(merged.dsum / merged.size)
                pooled.append(merged)
            else:
                pooled.extend(blocks[i:j])
            i = j
        blocks = pooled

    x = np.empty(len(d))
    for b in blocks:
        x[b.start:b.stop] = b.value
    # Remove sub-tolerance residue so the output is exactly feasible.
    x = np.maximum.accumulate(np.clip(x, lower, upper))
    return x, sweeps


def reg_isotonic(d, beta, box, return_sweeps=False):
    """Log-regularised isotonic regression on an ordered box.

    Parameters
    ----------
    d : array_like, shape (q,)
        Targets, typically the diagonal of ``U^T (Lw) U``.
    beta : float
        Penalty weight, ``> 0``.
    box : OrderedBox
        ``box.lower`` must be positive.
    return_sweeps : bool
        Also return the number of clamp/pool sweeps that were needed.

    Returns
    -------
    x : ndarray, shape (q,)
        The unique minimiser.
    sweeps : int
        Only when ``return_sweeps`` is set.
    """
    if not beta > 0:
        raise DomainError(f"beta must be positive, got {beta}")
    if not box.lower > 0:
        raise DomainError(f"lower bound must be positive, got {box.lower}")
    d = np.asarray(d, dtype=float).ravel()
    x, sweeps = _pool(d, lambda v: _log_block(v, beta), box.lower, box.upper)
    return (x, sweeps) if return_sweeps else x


def ls_isotonic(d, box, return_sweeps=False):
    """Least-squares projection onto ``lower <= x_1 <= ... <= x_q <= upper``."""
    d = np.asarray(d, dtype=float).ravel()
    x, sweeps = _pool(d, lambda v: v, box.lower, box.upper)
    return (x, sweeps) if return_sweeps else x


def sym_isotonic_psi(e, box):
    """Nearest spectrum symmetric about the origin, decreasing, with a box
    on its positive half.

    Solves ``min ||psi - e||^2`` over ``psi_i = -psi_{b+1-i}`` and
    ``box.upper >= psi_1 >= ... >= psi_{b/2} >= box.lower >= 0``.  Under the
    symmetry the cost splits into independent terms
    ``(psi_i - e_i)^2 + (psi_i + e_{b+1-i})^2``, so the half-problem target is
    ``(e_i - e_{b+1-i}) / 2``.

    Parameters
    ----------
    e : array_like, shape (b,)
        ``b`` must be even; strip zero eigenvalues before calling.
    box : OrderedBox
    """
    e = np.asarray(e, dtype=float).ravel()
    b = e.size
    if b % 2:
        raise DomainError(f"symmetric spectrum needs an even length, got {b}")
    if box.lower < 0:
        raise DomainError(f"lower bound must be non-negative, got {box.lower}")
    h = b // 2
    target = 0.5 * (e[:h] - e[::-1][:h])
    # Decreasing isotonic on the half == increasing isotonic on its negation.
    half = -ls_isotonic(-target, OrderedBox(-box.upper, -box.lower))
    return np.concatenate([half, -half[::-1]])


def _block_gradients(x, d, beta, with_log_term):
    if with_log_term:
        g = -1.0 / x + beta * (x - d)
        scale = 1.0 / np.abs(x) + beta * (np.abs(x) + np.abs(d))
    else:
        g = x - d
        scale = 1.0 + np.abs(x) + np.abs(d)
    return g, float(np.max(scale))


def kkt_residual(x, d, box, beta=None, with_log_term=True):
    """Scaled violation of the KKT system of the ordered, boxed problem.

    Multipliers are recovered block by block from stationarity; the result
    is the largest primal or dual violation divided by the magnitude of the
    gradient terms, so it is comparable across ``beta`` and scales of ``d``.
    """
    x = np.asarray(x, dtype=float).ravel()
    d = np.asarray(d, dtype=float).ravel()
    if x.size == 0:
        return 0.0
    g, scale = _block_gradients(x, d, beta, with_log_term)
    xs = max(1.0, float(np.max(np.abs(x))))
    viol = [box.lower - x[0], x[-1] - box.upper, *(x[:-1] - x[1:])]
    primal = max(0.0, max(viol)) / xs

    dual = 0.0
    q, s = x.size, 0
    eq = lambda a, b: abs(a - b) <= 1e3 * STRICT_TOL * max(1.0, abs(a), abs(b))
    while s < q:
        t = s
        while t + 1 < q and eq(x[t + 1], x[s]):
            t += 1
        P = np.cumsum(g[s:t + 1])
        free_start = s == 0 and eq(x[s], box.lower)
        free_end = t == q - 1 and eq(x[t], box.upper)
        if free_start and free_end:
            pass
        elif free_start:
            dual = max(dual, -P[-1], float(np.max(P[:-1] - P[-1], initial=0.0)))
        elif free_end:
            dual = max(dual, P[-1], float(np.max(P[:-1], initial=0.0)))
        else:
            dual = max(dual, abs(P[-1]), float(np.max(P[:-1], initial=0.0)))
        s = t + 1
    return max(primal, dual / scale)


def _stationary_points(d, beta, with_log_term):
    """Minimiser of the pooled cost over every contiguous block ``[s, t]``.

    With the log term the root of ``-m/x + beta*(m x - sum d)`` is found by
    bisection on ``log x``; without it the root is the block mean.
    """
    q = d.size
    s_idx, t_idx = np.triu_indices(q)
    csum = np.concatenate([[0.0], np.cumsum(d)])
    m = (t_idx - s_idx + 1).astype(float)
    dsum = csum[t_idx + 1] - csum[s_idx]
    if not with_log_term:
        return s_idx, t_idx, dsum / m

    def F(logx):
        x = np.exp(logx)
        return -m / x + beta * (m * x - dsum)

    lo = np.full(m.shape, -50.0)
    hi = np.full(m.shape, 50.0)
    while np.any(F(lo) > 0):
        lo = np.where(F(lo) > 0, lo - 50.0, lo)
    while np.any(F(hi) < 0):
        hi = np.where(F(hi) < 0, hi + 50.0, hi)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        neg = F(mid) < 0
        lo = np.where(neg, mid, lo)
        hi = np.where(neg, hi, mid)
    return s_idx, t_idx, np.exp(0.5 * (lo + hi))


def oracle_solve(d, beta, box, with_log_term=True):
    """Reference solver for tests, independent of the pooling sweeps.

    Uses the max-min characterisation of isotonic regression with separable
    convex costs, ``x_i = max_{s<=i} min_{t>=i} r(s, t)``, where ``r(s, t)``
    is the 1-D stationary point of the cost pooled over ``[s, t]``
    (bisection), followed by clipping to the box.  Cost is ``O(q^3)``.
    """
    d = np.asarray(d, dtype=float).ravel()
    q = d.size
    if q == 0:
        return d.copy()
    if with_log_term and not beta > 0:
        raise DomainError(f"beta must be positive, got {beta}")
    s_idx, t_idx, r = _stationary_points(d, beta, with_log_term)
    R = np.full((q, q), np.nan)
    R[s_idx, t_idx] = r
    x = np.empty(q)
    for i in range(q):
        x[i] = max(np.min(R[s, i:]) for s in range(i + 1))
    return np.clip(x, box.lower, box.upper)
