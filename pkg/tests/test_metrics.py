import numpy as np
import pytest

from specgraph.graphops import lap_apply
from specgraph.metrics import (
    EDGE_THRESHOLD,
    baseline_naive,
    baseline_qp,
    f_score,
    qp_objective,
    relative_error,
)
from specgraph.eigen import pinv
from specgraph.synthlab import gen_modular, sample_igmrf, scm


def test_relative_error_examples():
    T = lap_apply([1.0, 2.0, 3.0])
    assert relative_error(T, T) == 0.0
    assert relative_error(2 * T, T) == pytest.approx(1.0)
    assert relative_error(np.zeros((3, 3)), T) == pytest.approx(1.0)


def test_f_score_examples():
    T = lap_apply([1.0, 0.0, 0.5])
    r = f_score(T, T)
    assert r.f_score == 1.0 and (r.tp, r.fp, r.fn) == (2, 0, 0)
    r = f_score(lap_apply([1.0, 0.3, 0.0]), T)
    assert (r.tp, r.fp, r.fn) == (1, 1, 1) and r.f_score == pytest.approx(0.5)
    # weights below the threshold count as absent
    assert f_score(lap_apply([0.05, 0.0, 0.0]), np.zeros((3, 3))).f_score == 1.0
    assert f_score(lap_apply([0.0, 0.0, 0.0]), lap_apply([1.0, 0.0, 0.0])).f_score == 0.0
    assert EDGE_THRESHOLD == 0.1
    assert r.to_dict()["edge_threshold"] == 0.1


def test_naive_is_pinv():
    S = scm(sample_igmrf(gen_modular(6, 1, 1.0, 0.0, 0.5, 1.0, seed=0).theta, 100, seed=1))
    assert np.allclose(baseline_naive(S), pinv(S))


def _cvxpy_qp(T):
    import cvxpy as cp

    p = T.shape[0]
    W = cp.Variable((p, p), symmetric=True)
    L = cp.diag(cp.sum(W, axis=1)) - W
    cons = [W >= 0, cp.diag(W) == 0]
    prob = cp.Problem(cp.Minimize(cp.sum_squares(L - T)), cons)
    prob.solve(solver="CLARABEL")
    return prob.value


@pytest.mark.parametrize("p,seed", [(3, 0), (5, 1), (8, 2), (10, 3)])
def test_qp_matches_cvxpy(p, seed):
    gt = gen_modular(p, 2, 0.8, 0.2, 0.2, 1.5, seed=seed)
    S = scm(sample_igmrf(gt.theta, 5 * p, seed=seed + 10))
    w, trace = baseline_qp(S, return_trace=True)
    T = pinv(S)
    assert np.all(w >= 0)
    assert np.all(np.diff(trace) <= 1e-12 * max(trace))
    ref = _cvxpy_qp(T)
    assert qp_objective(w, T) == pytest.approx(ref, rel=1e-6, abs=1e-9)


def test_relative_error_empty_truth():
    Z = np.zeros((3, 3))
    assert relative_error(Z, Z) == 0.0
    assert relative_error(lap_apply([1.0, 0.0, 0.0]), Z) == np.inf
