"""Recovery metrics and the two reference estimators."""

from dataclasses import asdict, dataclass

import numpy as np

from .eigen import pinv
from .graphops import lap_adjoint, lap_apply, lap_gram_apply, lap_inverse

__all__ = ["EvalReport", "relative_error", "f_score", "baseline_naive", "baseline_qp", "qp_objective"]

EDGE_THRESHOLD = 0.1


@dataclass(frozen=True)
class EvalReport:
    relative_error: float
    f_score: float
    tp: int
    fp: int
    fn: int
    edge_threshold: float

    def to_dict(self):
        return asdict(self)


def relative_error(theta_hat, theta_true):
    """``||theta_hat - theta_true||_F / ||theta_true||_F``.

    An empty true graph gives 0 for an exact match and ``inf`` otherwise.
    """
    theta_true = np.asarray(theta_true, dtype=float)
    num = float(np.linalg.norm(np.asarray(theta_hat) - theta_true))
    den = float(np.linalg.norm(theta_true))
    if den == 0:
        return 0.0 if num == 0 else np.inf
    return num / den


def f_score(theta_hat, theta_true, threshold=EDGE_THRESHOLD):
    """Edge-recovery F-score; an edge is a weight ``-theta_ij >= threshold``.

    The same threshold is applied to both matrices.  When neither has an
    edge the score is 1.

    Returns
    -------
    EvalReport
        Also carries the relative error.
    """
    est = lap_inverse(np.asarray(theta_hat, dtype=float)) >= threshold
    ref = lap_inverse(np.asarray(theta_true, dtype=float)) >= threshold
    tp = int(np.sum(est & ref))
    fp = int(np.sum(est & ~ref))
    fn = int(np.sum(~est & ref))
    denom = 2 * tp + fp + fn
    fs = 1.0 if denom == 0 else 2 * tp / denom
    return EvalReport(relative_error(theta_hat, theta_true), fs, tp, fp, fn, float(threshold))


def baseline_naive(S):
    """Pseudo-inverse of the sample covariance."""
    return pinv(S)


def qp_objective(w, target):
    R = lap_apply(w) - target
    return float(np.sum(R * R))


def baseline_qp(S, tol=1e-10, max_iter=50000, return_trace=False):
    """Closest Laplacian to ``pinv(S)``: ``argmin_{w >= 0} ||pinv(S) - Lw||_F``.

    Projected gradient with step ``1 / (2p)``, started from the clipped
    edge weights of the pseudo-inverse.

    Returns
    -------
    w : ndarray
    trace : list of float
        Objective values, only if ``return_trace``.
    """
    T = pinv(S)
    p = T.shape[0]
    c = lap_adjoint(T)
    w = np.maximum(lap_inverse(T), 0.0)
    trace = [qp_objective(w, T)] if return_trace else None
    for _ in range(max_iter):
        w_new = np.maximum(w - (lap_gram_apply(w) - c) / (2.0 * p), 0.0)
        step = np.linalg.norm(w_new - w)
        w = w_new
        if return_trace:
            trace.append(qp_objective(w, T))
        if step <= tol * max(np.linalg.norm(w), 1e-12):
            break
    return (w, trace) if return_trace else w
