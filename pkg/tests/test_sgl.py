import numpy as np
import pytest

from helpers import central_gradient, monotone, rel_gap
from specgraph.config import ConfigError, LaplacianSpectralSet, SolverConfig
from specgraph.graphops import lap_apply, n_edges
from specgraph.sgl import (
    SglState,
    build_K,
    sgl_fit,
    sgl_init,
    sgl_objective,
    sgl_update_lambda,
    sgl_update_U,
    sgl_update_w,
    sgl_w_cost,
    sgl_w_gradient,
)
from specgraph.synthlab import gen_multicomponent, sample_igmrf, scm


def _random_state(p, k, beta, seed):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((3 * p, p))
    S = X.T @ X / (3 * p)
    spec = LaplacianSpectralSet(k=k)
    state = sgl_init(S, spec, SolverConfig(beta=beta, alpha=0.05), w0=rng.random(n_edges(p)))
    return state, rng


def test_objective_example():
    # p = 2, w = 1, exact spectral factors: only -log(2) + tr(S L) remains
    state = SglState(w=np.array([1.0]), U=np.array([[1.0], [-1.0]]) / np.sqrt(2), lam=np.array([2.0]),
                     K=np.eye(2), beta=5.0, spec=LaplacianSpectralSet())
    assert sgl_objective(state) == pytest.approx(-np.log(2) + 2.0)


def test_build_K():
    S = np.eye(3)
    assert np.array_equal(build_K(S, 0.0), S)
    K = build_K(S, 0.5)
    w = np.array([1.0, 2.0, 3.0])
    assert np.sum(K * lap_apply(w)) == pytest.approx(np.sum(S * lap_apply(w)) + 4 * 0.5 * w.sum())


@pytest.mark.parametrize("seed", range(5))
def test_weight_gradient_matches_finite_differences(seed):
    state, rng = _random_state(6, 2, 7.0, seed)
    w = rng.uniform(0.1, 2.0, n_edges(6))
    g = sgl_w_gradient(w, state)
    assert rel_gap(central_gradient(lambda v: sgl_w_cost(v, state), w), g) <= 1e-5


def test_weight_cost_is_scaled_objective():
    state, rng = _random_state(7, 1, 3.0, 11)
    w1, w2 = rng.random(21), rng.random(21)
    d_obj = sgl_objective(state.with_w(w1)) - sgl_objective(state.with_w(w2))
    d_cost = state.beta * (sgl_w_cost(w1, state) - sgl_w_cost(w2, state))
    assert d_obj == pytest.approx(d_cost, rel=1e-9)


@pytest.mark.parametrize("seed", range(5))
def test_block_updates_never_increase_objective(seed):
    state, _ = _random_state(8, 2, 10.0, seed)
    for _ in range(10):
        f0 = sgl_objective(state)
        state = state.with_w(sgl_update_w(state))
        f1 = sgl_objective(state)
        state.U = sgl_update_U(state)
        f2 = sgl_objective(state)
        state.lam = sgl_update_lambda(state)
        f3 = sgl_objective(state)
        assert f1 <= f0 + 1e-9 * abs(f0)
        assert f2 <= f1 + 1e-9 * abs(f1)
        assert f3 <= f2 + 1e-9 * abs(f2)
        assert np.all(state.w >= 0)


def test_U_diagonalises_Lw():
    state, _ = _random_state(9, 3, 10.0, 4)
    U = sgl_update_U(state)
    assert U.shape == (9, 6)
    assert np.allclose(U.T @ U, np.eye(6), atol=1e-10)
    D = U.T @ state.Lw @ U
    assert np.allclose(D, np.diag(np.diag(D)), atol=1e-9)


def test_fit_multicomponent_recovers_partition():
    gt = gen_multicomponent(16, 2, 0.8, 0.5, 1.5, seed=3)
    S = scm(sample_igmrf(gt.theta, 1600, seed=4))
    res = sgl_fit(S, LaplacianSpectralSet(k=2), SolverConfig(beta=50))
    assert monotone(res.objective)
    W = -res.theta
    np.fill_diagonal(W, 0.0)
    assert W[np.not_equal.outer(gt.labels, gt.labels)].max() < 0.1
    vals = np.linalg.eigvalsh(res.theta)
    assert vals[1] < 1e-2 * vals[2]
    assert res.converged and res.iterations < 5000
    assert len(res.objective) == res.iterations + 1


def test_cospectral_mode_pins_spectrum():
    gt = gen_multicomponent(8, 1, 1.0, 0.5, 1.5, seed=1)
    target = tuple(np.linalg.eigvalsh(gt.theta)[1:])
    S = scm(sample_igmrf(gt.theta, 4000, seed=2))
    spec = LaplacianSpectralSet(k=1, fixed_spectrum=target)
    res = sgl_fit(S, spec, SolverConfig(beta=1e3, max_iter=3000))
    assert np.array_equal(res.lambdas, np.array(target))
    assert monotone(res.objective)
    learned = np.linalg.eigvalsh(res.theta)[1:]
    assert rel_gap(learned, np.array(target)) < 0.05


def test_config_errors():
    with pytest.raises(ConfigError):
        LaplacianSpectralSet(k=0)
    with pytest.raises(ConfigError):
        LaplacianSpectralSet(k=5).check(5)
    with pytest.raises(ConfigError):
        LaplacianSpectralSet(fixed_spectrum=(2.0, 1.0))
    with pytest.raises(ConfigError):
        SolverConfig(beta=-1)
    with pytest.raises(ConfigError):
        SolverConfig().replace(bogus=1)


def test_callback_and_trace_summary():
    gt = gen_multicomponent(6, 1, 1.0, 0.5, 1.5, seed=0)
    S = scm(sample_igmrf(gt.theta, 600, seed=0))
    seen = []
    res = sgl_fit(S, cfg=SolverConfig(max_iter=25, tol=1e-12), callback=lambda it, st: seen.append(it))
    assert seen == list(range(1, 26)) and not res.converged
    summary = res.trace_summary(10)
    assert summary == [res.objective[0], res.objective[10], res.objective[20], res.objective[25]]
    d = res.to_dict()
    assert d["objective_stride"] == 10 and "U" not in d
