import numpy as np
import pytest

from specgraph.eigen import NumericalError, gdet, log_gdet, pinv, sym_eigen
from specgraph.graphops import lap_apply
from specgraph.synthlab import gen_multicomponent


def test_sym_eigen_examples():
    assert np.allclose(sym_eigen(np.diag([1.0, 2.0])).values, [1, 2])
    assert np.allclose(sym_eigen(lap_apply([3.0])).values, [0, 6])


def test_sym_eigen_reconstruction_and_orthonormality():
    rng = np.random.default_rng(0)
    for p in (1, 5, 30):
        M = rng.standard_normal((p, p))
        M = M + M.T
        pair = sym_eigen(M)
        assert np.all(np.diff(pair.values) >= 0)
        assert np.abs(pair.vectors.T @ pair.vectors - np.eye(p)).max() <= 1e-8
        assert np.linalg.norm(M - pair.reconstruct()) <= 1e-8 * np.linalg.norm(M)


def test_sym_eigen_sign_convention_is_deterministic():
    M = np.random.default_rng(1).standard_normal((6, 6))
    M = M + M.T
    a, b = sym_eigen(M), sym_eigen(M.copy())
    assert np.array_equal(a.vectors, b.vectors)
    lead = np.abs(a.vectors).argmax(axis=0)
    assert np.all(a.vectors[lead, np.arange(6)] >= 0)


def test_sym_eigen_rejects_bad_input():
    with pytest.raises(ValueError):
        sym_eigen(np.array([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(NumericalError):
        sym_eigen(np.array([[np.nan, 0.0], [0.0, 1.0]]))


def test_gdet():
    assert gdet(np.diag([0.0, 2.0, 3.0])) == pytest.approx(6.0)
    assert gdet(np.eye(7)) == pytest.approx(1.0)
    w = np.random.default_rng(2).uniform(0.5, 2.0, 45)
    L = lap_apply(w)
    J = np.full((10, 10), 0.1)
    assert gdet(L) == pytest.approx(np.linalg.det(L + J), rel=1e-8)
    assert log_gdet(L) == pytest.approx(np.linalg.slogdet(L + J)[1], rel=1e-10)


def test_gdet_k_component():
    gt = gen_multicomponent(12, 3, 1.0, 0.5, 1.5, seed=0)
    vals = sym_eigen(gt.theta).values
    assert np.sum(vals <= 1e-9 * vals.max()) == 3
    assert gdet(gt.theta) == pytest.approx(np.prod(vals[3:]), rel=1e-10)


def test_pinv():
    M = np.array([[2.0, 1.0], [1.0, 3.0]])
    assert np.allclose(pinv(M), np.linalg.inv(M))
    assert np.allclose(pinv(np.diag([0.0, 2.0])), np.diag([0.0, 0.5]))
    L = lap_apply(np.random.default_rng(3).random(28))
    P = pinv(L)
    assert np.allclose(L @ P @ L, L, atol=1e-8)
    assert np.allclose(P @ L @ P, P, atol=1e-8)
    assert np.allclose(P, P.T)
