"""Joint Laplacian and adjacency spectral constraints.

The problem is::

    minimize   -sum(log lambda) + tr(K Lw)
               + beta/2  * ||Lw - U Diag(lambda) U^T||_F^2
               + gamma/2 * ||Aw - V Diag(psi) V^T||_F^2

With ``k`` Laplacian zeros and a symmetric adjacency spectrum this targets
graphs made of ``k`` bipartite components.  The ``(U, lambda)`` and
``(V, psi)`` updates read only ``w``, so they are independent of each other.
"""

from dataclasses import dataclass, replace

import numpy as np

from .config import AdjacencySpectralSet, FitResult, LaplacianSpectralSet, SolverConfig
from .graphops import adj_adjoint, adj_apply, lap_adjoint, lap_apply, lap_gram_apply
from .sga import adjacency_factors, sga_update_psi, sga_update_V
from .sgl import build_K, relative_change, sgl_update_lambda, sgl_update_U, warm_start

__all__ = [
    "SglaState",
    "sgla_objective",
    "sgla_w_cost",
    "sgla_w_gradient",
    "sgla_update_w",
    "sgla_init",
    "sgla_fit",
]

# Adjacency set used when none is given: symmetric, no box on the positive half.
FREE_SYMMETRIC = AdjacencySpectralSet(z=None, c1=np.inf, c2=0.0)


@dataclass
class SglaState:
    """Iterate of the joint solver.

    It exposes the attribute names the Laplacian and adjacency updates read
    (``Lw``, ``U``, ``lam``, ``beta``, ``spec`` and ``w``, ``V``, ``psi``,
    ``adj_spec``), so those updates are reused as they are.
    """

    w: np.ndarray
    U: np.ndarray
    lam: np.ndarray
    V: np.ndarray
    psi: np.ndarray
    K: np.ndarray
    beta: float
    gamma: float
    spec: LaplacianSpectralSet
    adj_spec: AdjacencySpectralSet
    Lw: np.ndarray = None

    def __post_init__(self):
        if self.Lw is None:
            self.Lw = lap_apply(self.w)

    @property
    def p(self):
        return self.K.shape[0]

    def with_w(self, w):
        return replace(self, w=w, Lw=lap_apply(w))

    def adjacency_view(self):
        # The adjacency updates look up ``spec`` for the zero count.
        return _AdjView(self.w, self.V, self.adj_spec, self.p)


@dataclass
class _AdjView:
    w: np.ndarray
    V: np.ndarray
    spec: AdjacencySpectralSet
    p: int


def sgla_objective(state):
    R1 = state.Lw - (state.U * state.lam) @ state.U.T
    R2 = adj_apply(state.w) - adjacency_factors(state.V, state.psi)
    return float(
        -np.sum(np.log(state.lam))
        + np.sum(state.K * state.Lw)
        + 0.5 * state.beta * np.sum(R1 * R1)
        + 0.5 * state.gamma * np.sum(R2 * R2)
    )


def _linear_terms(state):
    c1 = state.beta * lap_adjoint((state.U * state.lam) @ state.U.T - state.K / state.beta)
    c2 = state.gamma * adj_adjoint(adjacency_factors(state.V, state.psi))
    return c1 + c2


def sgla_w_cost(w, state):
    """Weight subproblem ``beta/2 ||Lw||^2 + gamma/2 ||Aw||^2 - (c1 + c2)^T w``,
    equal to the objective in ``w`` up to a constant."""
    Lw = lap_apply(w)
    return float(0.5 * state.beta * np.sum(Lw * Lw) + state.gamma * (w @ w) - _linear_terms(state) @ w)


def sgla_w_gradient(w, state):
    return state.beta * lap_gram_apply(w) + 2.0 * state.gamma * w - _linear_terms(state)


def sgla_update_w(state):
    """Projected gradient step with step size ``1 / (2(p beta + gamma))``."""
    grad = sgla_w_gradient(state.w, state)
    return np.maximum(state.w - grad / (2.0 * (state.p * state.beta + state.gamma)), 0.0)


def _refresh_factors(state):
    view = state.adjacency_view()
    state.U = sgl_update_U(state)
    view.V = state.V = sga_update_V(view)
    state.lam = sgl_update_lambda(state)
    state.psi = sga_update_psi(view)
    return state


def sgla_init(S, lap_spec, adj_spec, cfg, w0=None):
    S = np.asarray(S, dtype=float)
    p = S.shape[0]
    lap_spec.check(p)
    adj_spec.zeros(p)
    w = warm_start(S) if w0 is None else np.asarray(w0, dtype=float)
    state = SglaState(w=w, U=None, lam=None, V=None, psi=None, K=build_K(S, cfg.alpha),
                      beta=cfg.beta, gamma=cfg.gamma, spec=lap_spec, adj_spec=adj_spec)
    return _refresh_factors(state)


def sgla_fit(S, lap_spec=None, adj_spec=None, cfg=None, w0=None, callback=None):
    """Learn a graph under joint Laplacian and adjacency constraints.

    Parameters
    ----------
    S : ndarray, shape (p, p)
    lap_spec : LaplacianSpectralSet, optional
        Number of components ``k``; defaults to ``k = 1``.
    adj_spec : AdjacencySpectralSet, optional
        Defaults to a symmetric spectrum with ``p mod 2`` zeros and no box.
    cfg : SolverConfig, optional
        Uses ``beta``, ``gamma``, ``alpha``, ``tol``, ``max_iter`` and the
        ``beta`` schedule.

    Returns
    -------
    FitResult
    """
    lap_spec = lap_spec or LaplacianSpectralSet()
    adj_spec = adj_spec or FREE_SYMMETRIC
    cfg = cfg or SolverConfig()
    state = sgla_init(S, lap_spec, adj_spec, cfg, w0)
    trace = [sgla_objective(state)]
    converged, it = False, 0
    for it in range(1, cfg.max_iter + 1):
        w_old = state.w
        state = _refresh_factors(state.with_w(sgla_update_w(state)))
        trace.append(sgla_objective(state))
        if callback is not None:
            callback(it, state)
        ramping = cfg.beta_growth > 1 and state.beta < cfg.beta_max
        if not ramping and relative_change(state.w, w_old, cfg.eps) < cfg.tol:
            converged = True
            break
        if ramping:
            state.beta = min(cfg.beta_growth * state.beta, cfg.beta_max)
    return FitResult(
        algorithm="sgla",
        w=state.w,
        objective=trace,
        iterations=it,
        converged=converged,
        lambdas=state.lam,
        U=state.U,
        psi=state.psi,
        V=state.V,
        beta=state.beta,
        gamma=state.gamma,
    )
