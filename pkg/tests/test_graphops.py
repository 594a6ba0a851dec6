import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from specgraph.graphops import (
    EdgeIndexMap,
    StructureError,
    adj_adjoint,
    adj_apply,
    adj_gram_apply,
    lap_adjoint,
    lap_apply,
    lap_gram_apply,
    lap_inverse,
    n_edges,
    n_nodes,
    operator_norms,
)


def test_lap_apply_four_node_example():
    L = lap_apply(np.arange(1.0, 7.0))
    assert np.allclose(np.diag(L), [6, 10, 12, 14])
    # 1-based (i, j) -> entry
    for (i, j), v in {(2, 1): -1, (3, 1): -2, (4, 1): -3, (3, 2): -4, (4, 2): -5, (4, 3): -6}.items():
        assert L[i - 1, j - 1] == v and L[j - 1, i - 1] == v


def test_lap_apply_small_cases():
    assert np.array_equal(lap_apply(np.zeros(10)), np.zeros((5, 5)))
    assert np.array_equal(lap_apply([2.5]), [[2.5, -2.5], [-2.5, 2.5]])


def test_lap_apply_rejects_bad_length():
    with pytest.raises(StructureError):
        lap_apply(np.ones(5))
    with pytest.raises(StructureError):
        lap_apply(np.ones(6), p=5)


def test_lap_adjoint_first_entry_and_identity():
    rng = np.random.default_rng(0)
    Y = rng.standard_normal((4, 4))
    assert np.isclose(lap_adjoint(Y)[0], Y[0, 0] - Y[1, 0] - Y[0, 1] + Y[1, 1])
    assert np.array_equal(lap_adjoint(np.eye(6)), np.full(15, 2.0))
    with pytest.raises(StructureError):
        lap_adjoint(np.ones((3, 4)))


def test_adj_apply_example_and_relation():
    A = adj_apply(np.arange(1.0, 7.0))
    assert np.all(np.diag(A) == 0) and A[1, 0] == 1 and A[3, 2] == 6
    w = np.random.default_rng(1).random(21)
    D = lap_apply(w) + adj_apply(w)
    assert np.array_equal(D, np.diag(np.diag(D)))
    assert np.array_equal(adj_apply(np.zeros(3)), np.zeros((3, 3)))


def test_adj_adjoint_examples():
    assert np.array_equal(adj_adjoint(np.eye(5)), np.zeros(10))
    Y = np.random.default_rng(2).standard_normal((5, 5))
    Y = Y + Y.T
    em = EdgeIndexMap(5)
    assert np.allclose(adj_adjoint(Y), 2 * Y[em.rows, em.cols])


@settings(max_examples=60, deadline=None)
@given(p=st.integers(2, 30), seed=st.integers(0, 2**32 - 1))
def test_adjoint_identities(p, seed):
    rng = np.random.default_rng(seed)
    w = rng.standard_normal(n_edges(p))
    Y = rng.standard_normal((p, p))
    lhs, rhs = np.sum(lap_apply(w) * Y), w @ lap_adjoint(Y)
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs), np.abs(w).sum() * np.abs(Y).max())
    lhs, rhs = np.sum(adj_apply(w) * Y), w @ adj_adjoint(Y)
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs), np.abs(w).sum() * np.abs(Y).max())


@settings(max_examples=60, deadline=None)
@given(p=st.integers(2, 30), seed=st.integers(0, 2**32 - 1))
def test_laplacian_structure(p, seed):
    w = np.random.default_rng(seed).random(n_edges(p))
    L = lap_apply(w)
    assert np.abs(L.sum(axis=1)).max() <= 1e-12 * max(1.0, w.sum())
    assert np.linalg.eigvalsh(L)[0] >= -1e-10 * max(1.0, w.sum())
    # strictly positive squared norm for w != 0
    assert np.sum(L * L) == pytest.approx(w @ lap_gram_apply(w), rel=1e-12)
    assert np.sum(L * L) > 0


@settings(max_examples=40, deadline=None)
@given(p=st.integers(2, 25), seed=st.integers(0, 2**32 - 1))
def test_gram_operators_match_composition(p, seed):
    w = np.random.default_rng(seed).standard_normal(n_edges(p))
    assert np.allclose(lap_gram_apply(w), lap_adjoint(lap_apply(w)), atol=1e-12)
    assert np.allclose(adj_gram_apply(w), adj_adjoint(adj_apply(w)), atol=1e-12)
    assert np.allclose(lap_inverse(lap_apply(w)), w)


@pytest.mark.parametrize("p", [2, 3, 7, 20])
def test_index_map_round_trip(p):
    em = EdgeIndexMap(p)
    ks = [em.index(*em.pair(k)) for k in range(1, em.m + 1)]
    assert ks == list(range(1, em.m + 1))
    # formula k = i - j + (j-1)(2p-j)/2 for i > j
    for k in range(1, em.m + 1):
        i, j = em.pair(k)
        assert i > j and k == i - j + (j - 1) * (2 * p - j) // 2
        assert lap_apply(np.eye(em.m)[k - 1])[i - 1, j - 1] == -1


def test_index_map_errors():
    em = EdgeIndexMap(4)
    with pytest.raises(StructureError):
        em.index(2, 2)
    with pytest.raises(StructureError):
        em.pair(7)
    with pytest.raises(StructureError):
        EdgeIndexMap(1)
    assert n_nodes(28) == 8
    with pytest.raises(StructureError):
        n_nodes(5)


def test_operator_norms():
    assert operator_norms(8) == pytest.approx((4.0, np.sqrt(2)))
    assert operator_norms(2) == pytest.approx((2.0, np.sqrt(2)))
    p = 9
    rng = np.random.default_rng(3)
    w = rng.standard_normal((1000, n_edges(p)))
    w /= np.linalg.norm(w, axis=1, keepdims=True)
    ratios = [np.linalg.norm(lap_apply(x)) for x in w]
    assert max(ratios) <= np.sqrt(2 * p)
    assert np.linalg.norm(lap_apply(np.ones(n_edges(p)))) == pytest.approx(p * np.sqrt(p - 1), rel=1e-12)
