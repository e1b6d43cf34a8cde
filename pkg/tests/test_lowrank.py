import numpy as np
import pytest

from lowrank import (
    EXACT,
    RkMatrix,
    TruncationControl,
    dense_to_rk,
    rk_restrict,
    rkadd,
    rkmerge,
    rowmerge,
    svd_trunc,
)
from utils import OpCounters
from utils.errors import DomainError


def _random_rk(rng, rows, cols, rank):
    return RkMatrix(rng.standard_normal((rows, rank)), rng.standard_normal((cols, rank)))


def _optimal_error(m, k):
    sigma = np.linalg.svd(m, compute_uv=False)
    return sigma[k] if k < sigma.size else 0.0, sigma[0]


class TestTruncationControl:
    def test_rank_rule(self):
        sigma = np.array([3.0, 2.0, 1.0])
        assert TruncationControl(rel_tol=0.5).choose_rank(sigma) == 2
        assert TruncationControl(max_rank=1, rel_tol=0.1).choose_rank(sigma) == 1
        assert TruncationControl().choose_rank(sigma) == 3

    def test_zero_spectrum(self):
        assert EXACT.choose_rank(np.array([])) == 0
        assert EXACT.choose_rank(np.zeros(4)) == 0

    def test_invalid(self):
        with pytest.raises(DomainError):
            TruncationControl(rel_tol=-1.0)
        with pytest.raises(DomainError):
            TruncationControl(max_rank=-1)

    def test_counters_are_optional(self):
        counters = OpCounters()
        ctl = TruncationControl(counters=counters)
        ctl.count("qr_calls")
        EXACT.count("qr_calls")
        assert counters.qr_calls == 1


class TestRkMatrix:
    def test_rank_mismatch(self):
        with pytest.raises(DomainError):
            RkMatrix(np.zeros((3, 2)), np.zeros((4, 1)))

    def test_zeros(self):
        r = RkMatrix.zeros(3, 5)
        assert r.rank == 0
        assert r.shape == (3, 5)
        np.testing.assert_array_equal(r.to_dense(), np.zeros((3, 5)))

    def test_adjoint(self, rng):
        r = _random_rk(rng, 4, 6, 2)
        np.testing.assert_allclose(r.adjoint().to_dense(), r.to_dense().T)

    def test_assign_checks_shape(self, rng):
        r = _random_rk(rng, 4, 6, 2)
        with pytest.raises(DomainError):
            r.assign(RkMatrix.zeros(6, 4))


class TestSvdTrunc:
    def test_optimal_error(self):
        """ Spectral error equals the first discarded singular value """
        rng = np.random.default_rng(1)
        for _ in range(100):
            rows, cols = rng.integers(2, 20, size=2)
            rank = int(rng.integers(1, 10))
            k = int(rng.integers(0, rank + 1))
            r = _random_rk(rng, rows, cols, rank)
            m = r.to_dense()
            t = svd_trunc(r, TruncationControl(max_rank=k))
            optimal, scale = _optimal_error(m, k)
            err = np.linalg.norm(m - t.to_dense(), 2)
            assert abs(err - optimal) <= 1e-10 * scale
            assert t.rank <= k

    def test_left_factor_orthonormal(self, rng):
        t = svd_trunc(_random_rk(rng, 12, 9, 5), TruncationControl(max_rank=3))
        np.testing.assert_allclose(t.a.T @ t.a, np.eye(t.rank), atol=1e-12)

    def test_rel_tol_drops_small_values(self, rng):
        u, _ = np.linalg.qr(rng.standard_normal((10, 3)))
        v, _ = np.linalg.qr(rng.standard_normal((8, 3)))
        m = u @ np.diag([1.0, 1e-2, 1e-8]) @ v.T
        r = dense_to_rk(m, TruncationControl(rel_tol=1e-4))
        assert r.rank == 2
        assert np.linalg.norm(m - r.to_dense(), 2) == pytest.approx(1e-8, rel=1e-6)

    def test_zero_rank(self):
        t = svd_trunc(RkMatrix.zeros(3, 4), EXACT)
        assert t.rank == 0 and t.shape == (3, 4)


class TestRkAdd:
    def test_optimal_error(self):
        rng = np.random.default_rng(2)
        for _ in range(100):
            rows, cols = rng.integers(2, 16, size=2)
            r1 = _random_rk(rng, rows, cols, int(rng.integers(0, 6)))
            r2 = _random_rk(rng, rows, cols, int(rng.integers(0, 6)))
            alpha = float(rng.uniform(-2.0, 2.0))
            k = int(rng.integers(0, 8))
            m = r2.to_dense() + alpha * r1.to_dense()
            rkadd(alpha, r1, r2, TruncationControl(max_rank=k))
            optimal, scale = _optimal_error(m, k)
            err = np.linalg.norm(m - r2.to_dense(), 2)
            assert abs(err - optimal) <= 1e-10 * max(scale, 1.0)

    def test_exact_without_truncation(self, rng):
        r1, r2 = _random_rk(rng, 7, 5, 2), _random_rk(rng, 7, 5, 1)
        expected = r2.to_dense() - 3.0 * r1.to_dense()
        rkadd(-3.0, r1, r2, EXACT)
        np.testing.assert_allclose(r2.to_dense(), expected, atol=1e-12)
        assert r2.rank == 3

    def test_both_zero(self):
        r2 = RkMatrix.zeros(3, 3)
        rkadd(1.0, RkMatrix.zeros(3, 3), r2, EXACT)
        assert r2.rank == 0

    def test_shape_mismatch(self):
        with pytest.raises(DomainError):
            rkadd(1.0, RkMatrix.zeros(3, 4), RkMatrix.zeros(4, 3), EXACT)

    def test_counts(self, rng):
        counters = OpCounters()
        r2 = _random_rk(rng, 5, 5, 1)
        rkadd(1.0, _random_rk(rng, 5, 5, 1), r2, TruncationControl(counters=counters))
        assert counters.rkadd_calls == 1
        assert counters.qr_calls == 1
        assert counters.svd_calls == 1


class TestMerge:
    def test_rowmerge_exact(self, rng):
        parts = [_random_rk(rng, 6, w, 2) for w in (3, 4, 5)]
        parts.append(RkMatrix.zeros(6, 2))
        merged = rowmerge(parts, EXACT)
        np.testing.assert_allclose(merged.to_dense(), np.hstack([p.to_dense() for p in parts]), atol=1e-12)
        assert merged.shape == (6, 14)

    def test_rowmerge_all_zero(self):
        merged = rowmerge([RkMatrix.zeros(3, 2), RkMatrix.zeros(3, 1)], EXACT)
        assert merged.rank == 0 and merged.shape == (3, 3)

    def test_rowmerge_errors(self):
        with pytest.raises(DomainError):
            rowmerge([], EXACT)
        with pytest.raises(DomainError):
            rowmerge([RkMatrix.zeros(3, 2), RkMatrix.zeros(4, 2)], EXACT)

    def test_rkmerge_exact(self, rng):
        heights, widths = (4, 5), (3, 6, 2)
        grid = [[_random_rk(rng, h, w, 1) for w in widths] for h in heights]
        merged = rkmerge(grid, EXACT)
        expected = np.block([[block.to_dense() for block in row] for row in grid])
        np.testing.assert_allclose(merged.to_dense(), expected, atol=1e-12)

    def test_rkmerge_optimal_error(self):
        """ Rank-1 blocks in a 2 x 2 grid: column merges stay exact at k = 2 """
        rng = np.random.default_rng(3)
        ctl = TruncationControl(max_rank=2)
        for _ in range(100):
            heights, widths = rng.integers(2, 8, size=2), rng.integers(2, 8, size=2)
            grid = [[_random_rk(rng, h, w, 1) for w in widths] for h in heights]
            m = np.block([[block.to_dense() for block in row] for row in grid])
            merged = rkmerge(grid, ctl)
            optimal, scale = _optimal_error(m, 2)
            err = np.linalg.norm(m - merged.to_dense(), 2)
            assert abs(err - optimal) <= 1e-10 * scale

    def test_rkmerge_ragged(self):
        with pytest.raises(DomainError):
            rkmerge([[RkMatrix.zeros(2, 2), RkMatrix.zeros(2, 2)], [RkMatrix.zeros(2, 2)]], EXACT)
        with pytest.raises(DomainError):
            rkmerge([[RkMatrix.zeros(2, 2)], [RkMatrix.zeros(2, 3)]], EXACT)


class TestRestrict:
    def test_restriction(self, rng):
        r = _random_rk(rng, 6, 7, 2)
        sub = rk_restrict(r, slice(1, 4), slice(2, 7))
        np.testing.assert_allclose(sub.to_dense(), r.to_dense()[1:4, 2:7])
        sub.a[...] = 0.0
        assert np.any(r.a != 0.0)

    @pytest.mark.parametrize("rows", [slice(0, 0), slice(3, 9), slice(None, 2), slice(0, 4, 2)])
    def test_invalid_range(self, rng, rows):
        with pytest.raises(DomainError):
            rk_restrict(_random_rk(rng, 6, 6, 1), rows, slice(0, 6))
