"""Connected bipartite graph learning under adjacency spectral constraints.

The problem is::

    minimize   -log det(Lw + J) + tr(K Lw) + gamma/2 * ||Aw - V Diag(psi) V^T||_F^2
    over       w >= 0,  V^T V = I,  psi symmetric about 0 with a boxed positive half

with ``J = 11^T / p``.  For a connected graph ``det(Lw + J)`` equals the
product of the non-zero Laplacian eigenvalues.  A bipartite graph has an
adjacency spectrum symmetric about the origin, which is what the ``psi``
constraint enforces.
"""

from dataclasses import dataclass, replace

import numpy as np

from .config import AdjacencySpectralSet, FitResult, SolverConfig
from .eigen import NumericalError, sym_eigen
from .graphops import adj_adjoint, adj_apply, lap_adjoint, lap_apply, operator_norms
from .isotonic import OrderedBox, sym_isotonic_psi
from .sgl import build_K, relative_change, warm_start

__all__ = [
    "SgaState",
    "sga_objective",
    "sga_w_cost",
    "sga_w_gradient",
    "sga_update_w",
    "sga_update_V",
    "sga_update_psi",
    "sga_init",
    "sga_fit",
    "adjacency_factors",
]

JITTER = 1e-10
JITTER_STEPS = 3
MAX_BACKTRACK = 60


@dataclass
class SgaState:
    w: np.ndarray
    V: np.ndarray
    psi: np.ndarray
    K: np.ndarray
    gamma: float
    spec: AdjacencySpectralSet
    l2_max: float = 1e6

    @property
    def p(self):
        return self.K.shape[0]


def _logdet_inv(M):
    """``(log det M, inv M, lambda_min)`` of a symmetric matrix that should be
    positive definite.

    A singular matrix is retried with ``1e-10 * I`` added, escalating ten-fold
    up to three times, before giving up.
    """
    p = M.shape[0]
    jitter = 0.0
    for attempt in range(JITTER_STEPS + 1):
        pair = sym_eigen(M + jitter * np.eye(p))
        vals = pair.values
        if vals[0] > 0:
            inv = (pair.vectors / vals) @ pair.vectors.T
            return float(np.sum(np.log(vals))), 0.5 * (inv + inv.T), float(vals[0])
        jitter = JITTER * 10.0**attempt
    raise NumericalError(
        f"Lw + J is singular (smallest eigenvalue {vals[0]:.3e}) after {JITTER_STEPS} jitter retries"
    )


def _is_pd(M):
    try:
        np.linalg.cholesky(M)
    except np.linalg.LinAlgError:
        return False
    return True


def _J(p):
    return np.full((p, p), 1.0 / p)


def adjacency_factors(V, psi):
    return (V * psi) @ V.T


def sga_objective(state):
    """Full objective; ``inf`` when ``Lw + J`` is not positive definite."""
    Lw = lap_apply(state.w)
    M = Lw + _J(state.p)
    if not _is_pd(M):
        return np.inf
    R = adj_apply(state.w) - adjacency_factors(state.V, state.psi)
    return float(
        -np.linalg.slogdet(M)[1] + np.sum(state.K * Lw) + 0.5 * state.gamma * np.sum(R * R)
    )


def _linear_term(state):
    return adj_adjoint(adjacency_factors(state.V, state.psi)) - lap_adjoint(state.K) / state.gamma


def sga_w_cost(w, state, c=None):
    """Weight subproblem, the objective divided by ``gamma`` up to a constant:
    ``(-log det(Lw + J)) / gamma + 1/2 ||Aw||^2 - c^T w``."""
    c = _linear_term(state) if c is None else c
    M = lap_apply(w) + _J(state.p)
    if not _is_pd(M):
        return np.inf
    return float(-np.linalg.slogdet(M)[1] / state.gamma + w @ w - c @ w)


def sga_w_gradient(w, state, c=None):
    """Gradient ``-(1/gamma) L*((Lw + J)^-1) + A*(Aw) - c`` of
    :func:`sga_w_cost`."""
    c = _linear_term(state) if c is None else c
    _, Minv, _ = _logdet_inv(lap_apply(w) + _J(state.p))
    return -lap_adjoint(Minv) / state.gamma + 2.0 * w - c


def sga_update_w(state, return_info=False):
    """Projected gradient step on the weight subproblem.

    The curvature bound is ``||A||^2 + L2/gamma`` with
    ``L2 = ||L||^2 / lambda_min(Lw + J)^2`` capped at ``state.l2_max``.  The
    bound is doubled until the quadratic model majorises the cost at the
    trial point and ``Lw + J`` stays positive definite, so the cost never
    increases.
    """
    p, gamma = state.p, state.gamma
    c = _linear_term(state)
    J = _J(p)
    logdet, Minv, lam_min = _logdet_inv(lap_apply(state.w) + J)
    h0 = -logdet / gamma + state.w @ state.w - c @ state.w
    grad = -lap_adjoint(Minv) / gamma + 2.0 * state.w - c
    norm_l, norm_a = operator_norms(p)
    lip = norm_a**2 + min(norm_l**2 / lam_min**2, state.l2_max) / gamma
    for _ in range(MAX_BACKTRACK):
        w_new = np.maximum(state.w - grad / lip, 0.0)
        step = w_new - state.w
        M = lap_apply(w_new) + J
        if _is_pd(M):
            h_new = -np.linalg.slogdet(M)[1] / gamma + w_new @ w_new - c @ w_new
            bound = h0 + grad @ step + 0.5 * lip * (step @ step)
            if h_new <= bound + 1e-12 * max(1.0, abs(h0)):
                return (w_new, lip) if return_info else w_new
        lip *= 2.0
    raise NumericalError(f"weight step found no descent after {MAX_BACKTRACK} halvings")


def _kept_columns(p, z):
    half = (p - z) // 2
    return np.r_[np.arange(half), np.arange(p - half, p)]


def sga_update_V(state):
    """Eigenvectors of ``Aw`` in descending eigenvalue order with the middle
    ``z`` dropped."""
    vecs = sym_eigen(adj_apply(state.w)).vectors[:, ::-1]
    return vecs[:, _kept_columns(state.p, state.spec.zeros(state.p))]


def sga_update_psi(state):
    """Symmetric boxed projection of ``diag(V^T Aw V)``."""
    A = adj_apply(state.w)
    e = np.einsum("ij,ij->j", state.V, A @ state.V)
    return sym_isotonic_psi(e, OrderedBox(state.spec.c2, state.spec.c1))


def sga_init(S, spec, cfg, w0=None):
    S = np.asarray(S, dtype=float)
    spec.zeros(S.shape[0])
    w = warm_start(S) + 1e-3 if w0 is None else np.asarray(w0, dtype=float)
    state = SgaState(w=w, V=None, psi=None, K=build_K(S, cfg.alpha), gamma=cfg.gamma,
                     spec=spec, l2_max=cfg.l2_max)
    state.V = sga_update_V(state)
    state.psi = sga_update_psi(state)
    return state


def sga_fit(S, spec=None, cfg=None, w0=None, callback=None):
    """Learn a connected bipartite graph.

    Parameters
    ----------
    S : ndarray, shape (p, p)
        Sample covariance matrix.
    spec : AdjacencySpectralSet, optional
    cfg : SolverConfig, optional
        Uses ``gamma``, ``alpha``, ``tol``, ``max_iter`` and ``l2_max``.
    w0 : ndarray, optional
        Initial weights; must give a connected graph.

    Returns
    -------
    FitResult
    """
    spec = spec or AdjacencySpectralSet()
    cfg = cfg or SolverConfig()
    state = sga_init(S, spec, cfg, w0)
    trace = [sga_objective(state)]
    converged, it = False, 0
    for it in range(1, cfg.max_iter + 1):
        w_old = state.w
        state = replace(state, w=sga_update_w(state))
        state.V = sga_update_V(state)
        state.psi = sga_update_psi(state)
        trace.append(sga_objective(state))
        if callback is not None:
            callback(it, state)
        if relative_change(state.w, w_old, cfg.eps) < cfg.tol:
            converged = True
            break
    return FitResult(
        algorithm="sga",
        w=state.w,
        objective=trace,
        iterations=it,
        converged=converged,
        psi=state.psi,
        V=state.V,
        gamma=state.gamma,
    )
