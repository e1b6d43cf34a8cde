import numpy as np
import pytest

from hmatrix import h_from_dense
from lowrank import TruncationControl
from trees import build_block_tree, build_cluster_tree


def _compress(points, matrix, leaf_size=4, eta=1.0, ctl=None):
    """
    Compress matrix (given in point order) over the trees of points.

    Returns:
        (HMatrix, dense matrix in tree ordering)
    """
    root, perm = build_cluster_tree(points, leaf_size)
    block = build_block_tree(root, root, eta)
    dense = np.asarray(matrix, dtype=np.float64)[np.ix_(perm, perm)]
    g = h_from_dense(block, dense, ctl if ctl is not None else TruncationControl())
    return g, dense


def _points(n, dim=2, seed=0):
    return np.random.default_rng(seed).random((n, dim))


def _diag_dominant(n, seed=0):
    rng = np.random.default_rng(seed)
    return rng.standard_normal((n, n)) + 2.0 * n * np.eye(n)


def _spd(n, seed=0):
    rng = np.random.default_rng(seed)
    b = rng.standard_normal((n, n))
    return b @ b.T / n + np.eye(n)


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture
def compress():
    return _compress


@pytest.fixture
def points():
    return _points


@pytest.fixture
def diag_dominant():
    return _diag_dominant


@pytest.fixture
def spd():
    return _spd
