import numpy as np
import pytest

from hmatrix import (
    addeval,
    addevaltrans,
    h_assign,
    h_clear,
    h_from_dense,
    h_identity,
    h_to_dense,
    h_transpose,
    h_zero,
    matvec,
    rkupdate,
    rmatvec,
    storage_stats,
)
from lowrank import EXACT, RkMatrix, TruncationControl
from problems import gaussian_matrix
from trees import BlockKind, build_block_tree, build_cluster_tree, iter_leaves
from utils import OpCounters
from utils.errors import ContractError, DomainError


@pytest.fixture
def kernel(points, compress):
    pts = points(64, seed=1)
    return compress(pts, gaussian_matrix(pts, 0.3, 0.1), leaf_size=4, eta=1.0)


def _leaves(g):
    if g.is_leaf():
        yield g
        return
    for row in g.sons:
        for son in row:
            yield from _leaves(son)


class TestContainer:
    def test_exact_compression(self, kernel):
        g, dense = kernel
        np.testing.assert_allclose(h_to_dense(g), dense, atol=1e-12)
        kinds = {leaf.kind for leaf in iter_leaves(g.block)}
        assert BlockKind.ADMISSIBLE in kinds

    def test_truncated_compression(self, points, compress):
        pts = points(64, seed=2)
        m = gaussian_matrix(pts, 0.3, 0.1)
        g, dense = compress(pts, m, ctl=TruncationControl(rel_tol=1e-6))
        err = np.linalg.norm(h_to_dense(g) - dense, 2)
        assert err <= 1e-5 * np.linalg.norm(dense, 2)
        assert storage_stats(g).total_reals < dense.size

    def test_shape_mismatch(self, kernel):
        g, _ = kernel
        with pytest.raises(DomainError):
            h_from_dense(g.block, np.zeros((3, 3)), EXACT)

    def test_copy_is_deep(self, kernel):
        g, dense = kernel
        c = g.copy()
        h_clear(c)
        np.testing.assert_array_equal(h_to_dense(c), 0.0)
        np.testing.assert_allclose(h_to_dense(g), dense, atol=1e-12)

    def test_assign(self, kernel):
        g, dense = kernel
        z = h_zero(g.block)
        h_assign(z, g)
        np.testing.assert_allclose(h_to_dense(z), dense, atol=1e-12)

    def test_transpose(self, kernel, rng):
        g, dense = kernel
        g.sons[0][1] = h_from_dense(g.sons[0][1].block, rng.standard_normal(g.sons[0][1].shape), EXACT)
        expected = h_to_dense(g).T
        np.testing.assert_allclose(h_to_dense(h_transpose(g)), expected, atol=1e-12)

    def test_identity(self, kernel):
        g, _ = kernel
        np.testing.assert_array_equal(h_to_dense(h_identity(g.block)), np.eye(g.shape[0]))

    def test_storage_stats(self, kernel):
        g, dense = kernel
        stats = storage_stats(g)
        assert stats.total_reals == stats.dense_reals + stats.lowrank_reals
        assert stats.max_rank >= 1
        assert sum(sum(c.values()) for c in stats.rank_histogram.values()) == sum(
            1 for leaf in iter_leaves(g.block) if leaf.kind is BlockKind.ADMISSIBLE
        )


class TestEval:
    def test_addeval_matches_dense(self, kernel, rng):
        g, dense = kernel
        x = rng.standard_normal((64, 3))
        y = rng.standard_normal((64, 3))
        expected = y + 0.5 * dense @ x
        addeval(0.5, g, x, y)
        np.testing.assert_allclose(y, expected, atol=1e-12)

    def test_addevaltrans_matches_dense(self, kernel, rng):
        g, dense = kernel
        g.sons[1][0] = h_from_dense(g.sons[1][0].block, rng.standard_normal(g.sons[1][0].shape), EXACT)
        dense = h_to_dense(g)
        y = rng.standard_normal((64, 2))
        x = np.zeros((64, 2))
        addevaltrans(-2.0, g, y, x)
        np.testing.assert_allclose(x, -2.0 * dense.T @ y, atol=1e-12)

    def test_matvec_vector(self, kernel, rng):
        g, dense = kernel
        v = rng.standard_normal(64)
        np.testing.assert_allclose(matvec(g, v), dense @ v, atol=1e-12)
        np.testing.assert_allclose(rmatvec(g, v), dense.T @ v, atol=1e-12)

    def test_zero_alpha_leaves_output(self, kernel, rng):
        g, _ = kernel
        y = rng.standard_normal((64, 1))
        before = y.copy()
        addeval(0.0, g, rng.standard_normal((64, 1)), y)
        np.testing.assert_array_equal(y, before)

    def test_addeval_linearity(self, kernel, rng):
        g, dense = kernel
        x1, x2 = rng.standard_normal((64, 2)), rng.standard_normal((64, 2))

        def _eval(alpha, x):
            y = np.zeros((64, 2))
            addeval(alpha, g, x, y)
            return y

        np.testing.assert_allclose(_eval(-3.0, x1), -3.0 * _eval(1.0, x1), atol=1e-12)
        np.testing.assert_allclose(_eval(1.0, x1 + x2), _eval(1.0, x1) + _eval(1.0, x2), atol=1e-12)

        # updates accumulate into y
        y = np.zeros((64, 2))
        addeval(0.5, g, x1, y)
        addeval(0.5, g, x2, y)
        np.testing.assert_allclose(y, 0.5 * dense @ (x1 + x2), atol=1e-12)

    def test_column_bound(self, kernel):
        g, _ = kernel
        with pytest.raises(ContractError):
            addeval(1.0, g, np.zeros((64, 5)), np.zeros((64, 5)), col_bound=4)

    def test_shape_errors(self, kernel):
        g, _ = kernel
        with pytest.raises(DomainError):
            addeval(1.0, g, np.zeros((63, 1)), np.zeros((64, 1)))
        with pytest.raises(DomainError):
            addevaltrans(1.0, g, np.zeros((64, 1)), np.zeros((64, 2)))


class TestRkUpdate:
    def test_exact_update(self, kernel, rng):
        g, dense = kernel
        r = RkMatrix(rng.standard_normal((64, 2)), rng.standard_normal((64, 2)))
        rkupdate(1.5, r, g, EXACT)
        np.testing.assert_allclose(h_to_dense(g), dense + 1.5 * r.to_dense(), atol=1e-10)

    def test_every_leaf_tallied_once(self, kernel, rng):
        g, _ = kernel
        counters = OpCounters()
        r = RkMatrix(rng.standard_normal((64, 1)), rng.standard_normal((64, 1)))
        rkupdate(1.0, r, g, TruncationControl(counters=counters))
        leaves = list(iter_leaves(g.block))
        assert counters.rkupdate_leaf_updates == len(leaves)
        assert set(counters.leaf_updates.values()) == {1}
        admissible = sum(1 for leaf in leaves if leaf.kind is BlockKind.ADMISSIBLE)
        assert counters.rkadd_calls == admissible

    def test_rank_zero_is_noop(self, kernel):
        g, dense = kernel
        counters = OpCounters()
        rkupdate(1.0, RkMatrix.zeros(64, 64), g, TruncationControl(counters=counters))
        np.testing.assert_array_equal(h_to_dense(g), dense)
        assert counters.rkupdate_leaf_updates == 0

    def test_truncated_update_stays_close(self, kernel, rng):
        g, dense = kernel
        r = RkMatrix(rng.standard_normal((64, 2)), rng.standard_normal((64, 2)))
        rkupdate(1.0, r, g, TruncationControl(rel_tol=1e-8))
        expected = dense + r.to_dense()
        assert np.linalg.norm(h_to_dense(g) - expected, 2) <= 1e-6 * np.linalg.norm(expected, 2)

    @pytest.mark.parametrize("ctl", [TruncationControl(max_rank=1), TruncationControl(rel_tol=0.3)])
    def test_leaf_errors_are_optimal(self, kernel, rng, ctl):
        """ Every admissible leaf ends up as the best approximation of its old value plus the update """
        g, dense = kernel
        r = RkMatrix(rng.standard_normal((64, 3)), rng.standard_normal((64, 3)))
        target = dense + 0.7 * r.to_dense()
        rkupdate(0.7, r, g, ctl)

        admissible = 0
        for leaf in _leaves(g):
            rows, cols = leaf.row.index_set.slice, leaf.col.index_set.slice
            if leaf.is_dense():
                np.testing.assert_allclose(leaf.dense, target[rows, cols], atol=1e-12)
                continue
            admissible += 1
            sigma = np.linalg.svd(target[rows, cols], compute_uv=False)
            k = leaf.rk.rank
            assert k == ctl.choose_rank(sigma)
            optimal = np.sqrt(np.sum(sigma[k:] ** 2))
            err = np.linalg.norm(leaf.rk.to_dense() - target[rows, cols])
            assert abs(err - optimal) <= 1e-10 * sigma[0]
        assert admissible > 0
    def test_shape_mismatch(self, kernel):
        g, _ = kernel
        with pytest.raises(DomainError):
            rkupdate(1.0, RkMatrix.zeros(64, 32), g, EXACT)


def test_rectangular_block_tree(points, rng):
    rows, _ = build_cluster_tree(points(20, seed=3), 3)
    cols, _ = build_cluster_tree(points(36, seed=4) + 0.5, 4)
    block = build_block_tree(rows, cols, 1.0)
    m = rng.standard_normal((20, 36))
    g = h_from_dense(block, m, EXACT)
    np.testing.assert_allclose(h_to_dense(g), m, atol=1e-12)
    np.testing.assert_allclose(h_to_dense(h_transpose(g)), m.T, atol=1e-12)
