"""Structured graph learning under Laplacian spectral constraints.

The problem is::

    minimize   -sum(log lambda) + tr(K Lw) + beta/2 * ||Lw - U Diag(lambda) U^T||_F^2
    over       w >= 0,  U^T U = I,  lambda in the ordered box of the spectral set

and is solved by cycling exact or majorised minimisation over ``w``, ``U``
and ``lambda``.  ``U`` holds the eigenvectors of the ``q = p - k`` largest
Laplacian eigenvalues, so the ``k`` dropped ones are forced to zero and the
learned graph has ``k`` components once the penalty is tight.
"""

from dataclasses import dataclass, replace

import numpy as np

from .config import FitResult, LaplacianSpectralSet, SolverConfig
from .eigen import sym_eigen
from .graphops import lap_adjoint, lap_apply, lap_gram_apply
from .isotonic import OrderedBox, reg_isotonic
from .metrics import baseline_qp

__all__ = [
    "SglState",
    "build_K",
    "warm_start",
    "sgl_objective",
    "sgl_w_cost",
    "sgl_w_gradient",
    "sgl_update_w",
    "sgl_update_U",
    "sgl_update_lambda",
    "sgl_init",
    "sgl_fit",
]


def build_K(S, alpha):
    """``K = S + alpha * (2I - 11^T)``; the extra term adds ``4 alpha sum(w)``."""
    S = np.asarray(S, dtype=float)
    p = S.shape[0]
    if alpha == 0:
        return S.copy()
    return S + alpha * (2.0 * np.eye(p) - np.ones((p, p)))


def warm_start(S):
    """Non-negative least-squares Laplacian fit to ``pinv(S)``.

    Each iteration moves ``w`` by only ``O(1/(p beta))`` of the likelihood
    gradient, so starting close to the data matters.  Falls back to the
    complete graph with unit weights when the fit is empty.
    """
    w = baseline_qp(S)
    if not np.all(np.isfinite(w)) or not np.any(w > 0):
        w = np.ones_like(w)
    return w


def relative_change(w_new, w_old, eps):
    return float(np.linalg.norm(w_new - w_old) / max(np.linalg.norm(w_old), eps))


@dataclass
class SglState:
    """Iterate of the Laplacian-constrained solver.

    ``Lw`` is cached next to ``w``; keep the two consistent via
    :meth:`with_w`.
    """

    w: np.ndarray
    U: np.ndarray
    lam: np.ndarray
    K: np.ndarray
    beta: float
    spec: LaplacianSpectralSet
    Lw: np.ndarray = None

    def __post_init__(self):
        if self.Lw is None:
            self.Lw = lap_apply(self.w)

    def with_w(self, w):
        return replace(self, w=w, Lw=lap_apply(w))


def _spectral_target(U, lam):
    return (U * lam) @ U.T


def sgl_objective(state):
    """Full objective at ``state``."""
    R = state.Lw - _spectral_target(state.U, state.lam)
    return float(
        -np.sum(np.log(state.lam))
        + np.sum(state.K * state.Lw)
        + 0.5 * state.beta * np.sum(R * R)
    )


def _linear_term(state):
    return lap_adjoint(_spectral_target(state.U, state.lam) - state.K / state.beta)


def sgl_w_cost(w, state):
    """Weight subproblem ``1/2 ||Lw||^2 - c^T w``.

    Equals ``(objective - const) / beta`` as a function of ``w`` with ``U``
    and ``lambda`` held fixed.
    """
    Lw = lap_apply(w)
    return float(0.5 * np.sum(Lw * Lw) - _linear_term(state) @ w)


def sgl_w_gradient(w, state):
    """Gradient ``L*(Lw) - c`` of :func:`sgl_w_cost`."""
    return lap_gram_apply(w) - _linear_term(state)


def sgl_update_w(state):
    """Projected gradient step with step size ``1 / (2p)``.

    ``2p`` is the squared operator norm of the Laplacian map, so the step
    minimises a quadratic upper bound of the weight subproblem.
    """
    p = state.Lw.shape[0]
    grad = lap_gram_apply(state.w) - _linear_term(state)
    return np.maximum(state.w - grad / (2.0 * p), 0.0)


def sgl_update_U(state):
    """Eigenvectors of ``Lw`` for all but the ``k`` smallest eigenvalues."""
    return sym_eigen(state.Lw).vectors[:, state.spec.k:]


def sgl_update_lambda(state):
    """Ordered eigenvalue update: regularised isotonic fit to
    ``diag(U^T Lw U)``, or the fixed spectrum in cospectral mode."""
    spec = state.spec
    if spec.fixed_spectrum is not None:
        return np.array(spec.fixed_spectrum, dtype=float)
    d = np.einsum("ij,ij->j", state.U, state.Lw @ state.U)
    return reg_isotonic(d, state.beta, OrderedBox(spec.c1, spec.c2))


def sgl_init(S, spec, cfg, w0=None):
    """Initial state: warm-start weights, then exact ``U`` and ``lambda``."""
    S = np.asarray(S, dtype=float)
    spec.check(S.shape[0])
    w = warm_start(S) if w0 is None else np.asarray(w0, dtype=float)
    state = SglState(w=w, U=None, lam=None, K=build_K(S, cfg.alpha), beta=cfg.beta, spec=spec)
    state.U = sgl_update_U(state)
    state.lam = sgl_update_lambda(state)
    return state


def sgl_fit(S, spec=None, cfg=None, w0=None, callback=None):
    """Learn a Laplacian with the spectral structure described by ``spec``.

    Parameters
    ----------
    S : ndarray, shape (p, p)
        Sample covariance matrix.
    spec : LaplacianSpectralSet, optional
        Defaults to the connected mode ``k = 1``.
    cfg : SolverConfig, optional
    w0 : ndarray, optional
        Initial weights; the pseudo-inverse warm start is used otherwise.
    callback : callable, optional
        Called as ``callback(iteration, state)`` after every iteration.

    Returns
    -------
    FitResult
        ``converged`` is False when ``cfg.max_iter`` ran out first.
    """
    spec = spec or LaplacianSpectralSet()
    cfg = cfg or SolverConfig()
    state = sgl_init(S, spec, cfg, w0)
    trace = [sgl_objective(state)]
    converged, it = False, 0
    for it in range(1, cfg.max_iter + 1):
        w_old = state.w
        state = state.with_w(sgl_update_w(state))
        state.U = sgl_update_U(state)
        state.lam = sgl_update_lambda(state)
        trace.append(sgl_objective(state))
        if callback is not None:
            callback(it, state)
        ramping = cfg.beta_growth > 1 and state.beta < cfg.beta_max
        if not ramping and relative_change(state.w, w_old, cfg.eps) < cfg.tol:
            converged = True
            break
        if ramping:
            state.beta = min(cfg.beta_growth * state.beta, cfg.beta_max)
    return FitResult(
        algorithm="sgl",
        w=state.w,
        objective=trace,
        iterations=it,
        converged=converged,
        lambdas=state.lam,
        U=state.U,
        beta=state.beta,
    )
