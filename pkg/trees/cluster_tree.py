"""
Cluster trees over point geometries.

Clusters own contiguous ranges of the permuted index set, so every
submatrix G|_{t x s} is a plain slice of a matrix stored in tree order.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, List, Tuple

import numpy as np

from utils import logger
from utils.errors import DomainError


@dataclass(frozen=True)
class IndexSet:
    offset: int
    size: int

    @property
    def stop(self) -> int:
        return self.offset + self.size

    @property
    def slice(self) -> slice:
        return slice(self.offset, self.stop)

    def relative_to(self, parent: "IndexSet") -> slice:
        """ Position of this range inside the parent's range """
        start = self.offset - parent.offset
        return slice(start, start + self.size)


@dataclass(eq=False)
class Cluster:
    index_set: IndexSet
    bbox_min: np.ndarray
    bbox_max: np.ndarray
    sons: List["Cluster"] = field(default_factory=list)
    level: int = 0

    @property
    def offset(self) -> int:
        return self.index_set.offset

    @property
    def size(self) -> int:
        return self.index_set.size

    @property
    def key(self) -> Tuple[int, int, int]:
        return (self.index_set.offset, self.index_set.size, self.level)

    def is_leaf(self) -> bool:
        return len(self.sons) == 0

    @cached_property
    def max_leaf_size(self) -> int:
        """ Largest leaf below this cluster; the sons must not change afterwards """
        if self.is_leaf():
            return self.size
        return max(son.max_leaf_size for son in self.sons)

    def diameter(self) -> float:
        return float(np.linalg.norm(self.bbox_max - self.bbox_min))

    def distance(self, other: "Cluster") -> float:
        gap = np.maximum(0.0, other.bbox_min - self.bbox_max) + np.maximum(
            0.0, self.bbox_min - other.bbox_max
        )
        return float(np.linalg.norm(gap))

    def slice_in(self, parent: "Cluster") -> slice:
        return self.index_set.relative_to(parent.index_set)

    def __repr__(self) -> str:
        return "Cluster(offset={}, size={}, level={}, sons={})".format(
            self.offset, self.size, self.level, len(self.sons)
        )


def _split_order(points: np.ndarray) -> np.ndarray:
    """
    Order for bisecting a point set: stable sort along the longest box axis,
    lowest axis index on ties. A box of zero extent keeps index order.
    """
    extent = points.max(axis=0) - points.min(axis=0)
    if not np.any(extent > 0.0):
        return np.arange(points.shape[0])
    axis = int(np.argmax(extent))
    return np.argsort(points[:, axis], kind="stable")


def build_cluster_tree(points, leaf_size: int) -> Tuple[Cluster, np.ndarray]:
    """
    Geometric bisection at the coordinate median.

    Args:
        points: (n, d) coordinates
        leaf_size (int): clusters with at most this many indices become leaves

    Returns:
        root (Cluster), perm (np.ndarray): perm[i] is the original index of
        the point at tree position i
    """

    points = np.asarray(points, dtype=np.float64)
    if points.ndim == 1:
        points = points.reshape(-1, 1)
    if points.size == 0 or points.shape[0] == 0:
        raise DomainError("Cannot build a cluster tree over an empty point set")
    if leaf_size < 1:
        raise DomainError(f"leaf_size must be positive, got {leaf_size}")

    perm = np.arange(points.shape[0])

    def _build(offset: int, size: int, level: int) -> Cluster:
        local = points[perm[offset : offset + size]]
        cluster = Cluster(
            index_set=IndexSet(offset, size),
            bbox_min=local.min(axis=0),
            bbox_max=local.max(axis=0),
            level=level,
        )
        if size <= leaf_size:
            return cluster

        order = _split_order(local)
        perm[offset : offset + size] = perm[offset : offset + size][order]
        half = size // 2
        cluster.sons = [
            _build(offset, half, level + 1),
            _build(offset + half, size - half, level + 1),
        ]
        return cluster

    root = _build(0, points.shape[0], 0)
    logger.debug(f"Cluster tree over {points.shape[0]} points, leaf_size={leaf_size}")
    return root, perm


def iter_clusters(root: Cluster) -> Iterator[Cluster]:
    """ Pre-order traversal """
    stack = [root]
    while stack:
        cluster = stack.pop()
        yield cluster
        stack.extend(reversed(cluster.sons))
