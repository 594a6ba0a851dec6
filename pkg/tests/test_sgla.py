import numpy as np
import pytest

from helpers import central_gradient, monotone, rel_gap
from specgraph.config import AdjacencySpectralSet, LaplacianSpectralSet, SolverConfig
from specgraph.graphops import n_edges
from specgraph.sgla import (
    FREE_SYMMETRIC,
    _refresh_factors,
    sgla_fit,
    sgla_init,
    sgla_objective,
    sgla_update_w,
    sgla_w_cost,
    sgla_w_gradient,
)
from specgraph.synthlab import compose_disjoint, gen_bipartite, sample_igmrf, scm


def _state(p, k, beta, gamma, seed):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((3 * p, p))
    S = X.T @ X / (3 * p)
    cfg = SolverConfig(beta=beta, gamma=gamma, alpha=0.01)
    w0 = rng.uniform(0.1, 1.0, n_edges(p))
    return sgla_init(S, LaplacianSpectralSet(k=k), FREE_SYMMETRIC, cfg, w0=w0), rng


@pytest.mark.parametrize("seed", range(5))
def test_weight_gradient_matches_finite_differences(seed):
    state, rng = _state(7, 2, 3.0, 5.0, seed)
    w = rng.uniform(0.1, 2.0, n_edges(7))
    fd = central_gradient(lambda v: sgla_w_cost(v, state), w)
    assert rel_gap(fd, sgla_w_gradient(w, state)) <= 1e-5


def test_weight_cost_is_objective_up_to_constant():
    state, rng = _state(6, 1, 4.0, 2.0, 9)
    w1, w2 = rng.random(15), rng.random(15)
    d_obj = sgla_objective(state.with_w(w1)) - sgla_objective(state.with_w(w2))
    assert d_obj == pytest.approx(sgla_w_cost(w1, state) - sgla_w_cost(w2, state), rel=1e-9)


@pytest.mark.parametrize("seed", range(4))
def test_iterations_never_increase_objective(seed):
    state, _ = _state(10, 2, 20.0, 20.0, seed)
    for _ in range(20):
        f0 = sgla_objective(state)
        state = state.with_w(sgla_update_w(state))
        f1 = sgla_objective(state)
        state = _refresh_factors(state)
        f2 = sgla_objective(state)
        assert f1 <= f0 + 1e-9 * abs(f0)
        assert f2 <= f1 + 1e-9 * abs(f1)


def test_default_adjacency_set():
    assert FREE_SYMMETRIC.c1 == np.inf and FREE_SYMMETRIC.c2 == 0.0
    assert FREE_SYMMETRIC.zeros(7) == 1


def test_fit_two_bipartite_components():
    gt = compose_disjoint(gen_bipartite(4, 5, 0.9, 0.5, 1.5, seed=1), gen_bipartite(5, 4, 0.9, 0.5, 1.5, seed=2))
    S = scm(sample_igmrf(gt.theta, 9000, seed=3))
    res = sgla_fit(S, LaplacianSpectralSet(k=2), AdjacencySpectralSet(c1=np.inf, c2=0.0),
                   SolverConfig(beta=100, gamma=100))
    assert monotone(res.objective)
    W = -res.theta
    np.fill_diagonal(W, 0.0)
    assert W[np.not_equal.outer(gt.labels, gt.labels)].max() < 0.1
    assert res.lambdas.shape == (16,) and res.psi.shape == (18,)
