"""
Dense collocation matrices of the model problems, rows and columns in
point order.
"""

from typing import Tuple

import numpy as np
import scipy.linalg
from scipy.spatial.distance import cdist

from utils import logger
from utils.errors import DomainError, NumericalError

from .sphere import SurfacePointCloud

# rescaling the SLP diagonal stops after this many doublings
MAX_DIAGONAL_DOUBLINGS = 30


def _check_cloud(cloud: SurfacePointCloud) -> None:
    if len(cloud) == 0:
        raise DomainError("Point cloud is empty")


def _offdiagonal_distance(points: np.ndarray) -> np.ndarray:
    r = cdist(points, points)
    np.fill_diagonal(r, 1.0)
    return r


def slp_matrix(cloud: SurfacePointCloud) -> np.ndarray:
    """
    Single layer potential g_ij = w_j / (4 pi |x_i - x_j|); the diagonal uses
    the radius r_i = sqrt(w_i / pi) of the disk with the panel's area.
    """
    _check_cloud(cloud)
    w = cloud.weights
    g = w[None, :] / (4.0 * np.pi * _offdiagonal_distance(cloud.points))
    np.fill_diagonal(g, w / (4.0 * np.pi * np.sqrt(w / np.pi)))
    return 0.5 * (g + g.T)


def _is_spd(g: np.ndarray) -> bool:
    try:
        scipy.linalg.cholesky(g, lower=True, check_finite=False)
    except scipy.linalg.LinAlgError:
        return False
    return True


def slp_matrix_with_scale(cloud: SurfacePointCloud) -> Tuple[np.ndarray, float]:
    """
    SLP matrix whose diagonal is multiplied by the smallest power of two that
    makes it positive definite.

    Returns:
        (matrix, scale)
    """
    g = slp_matrix(cloud)
    diagonal = np.diag(g).copy()
    scale = 1.0
    for _ in range(MAX_DIAGONAL_DOUBLINGS):
        if _is_spd(g):
            if scale != 1.0:
                logger.warning(f"SLP diagonal scaled by {scale:g} to keep the matrix positive definite")
            return g, scale
        scale *= 2.0
        np.fill_diagonal(g, scale * diagonal)
    raise NumericalError(f"SLP matrix not positive definite after scaling the diagonal by {scale:g}")


def dlp_matrix(cloud: SurfacePointCloud) -> np.ndarray:
    """ Double layer potential plus 1/2 identity """
    _check_cloud(cloud)
    x, w, normals = cloud.points, cloud.weights, cloud.normals
    # <x_i - x_j, n_j>
    numer = x @ normals.T - np.einsum("ij,ij->i", x, normals)[None, :]
    r = _offdiagonal_distance(x)
    k = w[None, :] * numer / (4.0 * np.pi * r ** 3)
    np.fill_diagonal(k, 0.5)
    return k


def gaussian_matrix(points: np.ndarray, length_scale: float = 0.25, jitter: float = 0.1) -> np.ndarray:
    """ g_ij = exp(-|x_i - x_j|^2 / (2 length_scale^2)) + jitter [i = j] """
    if length_scale <= 0.0:
        raise DomainError(f"length_scale must be positive, got {length_scale}")
    if jitter < 0.0:
        raise DomainError(f"jitter must be nonnegative, got {jitter}")
    points = np.asarray(points, dtype=np.float64)
    if points.ndim == 1:
        points = points.reshape(-1, 1)
    g = np.exp(-cdist(points, points, "sqeuclidean") / (2.0 * length_scale ** 2))
    g[np.diag_indices_from(g)] += jitter
    return g
