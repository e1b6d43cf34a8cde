"""
Polygonal approximation of the unit sphere.

The octahedron is refined regularly (every triangle split into four at its
edge midpoints) and the vertices are projected to the sphere. Each
triangle contributes one collocation point (its projected barycenter)
weighted by the area of the corresponding spherical triangle.
"""

from dataclasses import dataclass

import numpy as np

from utils import logger
from utils.errors import DomainError


@dataclass(eq=False)
class SurfacePointCloud:
    points: np.ndarray   # (n, 3), |x| = 1
    weights: np.ndarray  # (n,), panel areas
    normals: np.ndarray  # (n, 3), outward unit normals

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def total_area(self) -> float:
        return float(self.weights.sum())


def _normalize(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def octahedron_faces() -> np.ndarray:
    """ (8, 3, 3) triangles of the double pyramid over the unit square """
    ex, ey, ez = np.eye(3)
    faces = []
    for sz in (1.0, -1.0):
        for a, b in ((ex, ey), (ey, -ex), (-ex, -ey), (-ey, ex)):
            faces.append((a, b, sz * ez) if sz > 0 else (b, a, sz * ez))
    return np.array(faces, dtype=np.float64)


def refine_faces(faces: np.ndarray) -> np.ndarray:
    """ Split every triangle into four, midpoints projected to the sphere """
    a, b, c = faces[:, 0], faces[:, 1], faces[:, 2]
    ab, bc, ca = _normalize(a + b), _normalize(b + c), _normalize(c + a)
    return np.concatenate(
        [
            np.stack([a, ab, ca], axis=1),
            np.stack([ab, b, bc], axis=1),
            np.stack([ca, bc, c], axis=1),
            np.stack([ab, bc, ca], axis=1),
        ]
    )


def spherical_triangle_area(faces: np.ndarray) -> np.ndarray:
    """ tan(E/2) = |a.(b x c)| / (1 + a.b + b.c + c.a) for unit vectors """
    a, b, c = faces[:, 0], faces[:, 1], faces[:, 2]
    triple = np.abs(np.einsum("ij,ij->i", a, np.cross(b, c)))
    denom = 1.0 + np.einsum("ij,ij->i", a, b) + np.einsum("ij,ij->i", b, c) + np.einsum("ij,ij->i", c, a)
    return 2.0 * np.arctan2(triple, denom)


def sphere_cloud(refinement_level: int) -> SurfacePointCloud:
    """
    Args:
        refinement_level (int): number of 4-way refinements, 8 * 4**level points
    """
    if refinement_level < 0:
        raise DomainError(f"Refinement level must be nonnegative, got {refinement_level}")

    faces = octahedron_faces()
    for _ in range(refinement_level):
        faces = refine_faces(faces)

    points = _normalize(faces.sum(axis=1))
    weights = spherical_triangle_area(faces)
    logger.debug(f"Sphere level {refinement_level}: {len(points)} points, area {weights.sum():.6f}")
    return SurfacePointCloud(points, weights, points.copy())
