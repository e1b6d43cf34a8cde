"""
Model problems selectable by name from the benchmark configuration.
"""

from dataclasses import dataclass, field
from typing import Any, Dict

import numpy as np

from utils import Registry
from utils.errors import ConfigError

from .kernels import dlp_matrix, gaussian_matrix, slp_matrix_with_scale
from .sphere import SurfacePointCloud, sphere_cloud

PROBLEMS = Registry("problems")


@dataclass(eq=False)
class ModelProblem:
    name: str
    level: int
    cloud: SurfacePointCloud
    matrix: np.ndarray
    symmetric: bool
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def points(self) -> np.ndarray:
        return self.cloud.points


@PROBLEMS.register("slp")
def build_slp(level: int, opts=None) -> ModelProblem:
    cloud = sphere_cloud(level)
    g, scale = slp_matrix_with_scale(cloud)
    return ModelProblem("slp", level, cloud, g, True, {"slp_diagonal_scale": scale})


@PROBLEMS.register("dlp")
def build_dlp(level: int, opts=None) -> ModelProblem:
    cloud = sphere_cloud(level)
    return ModelProblem("dlp", level, cloud, dlp_matrix(cloud), False)


@PROBLEMS.register("gaussian")
def build_gaussian(level: int, opts=None) -> ModelProblem:
    length_scale = float(getattr(opts, "problem.length_scale", 0.25))
    jitter = float(getattr(opts, "problem.jitter", 0.1))
    cloud = sphere_cloud(level)
    g = gaussian_matrix(cloud.points, length_scale, jitter)
    return ModelProblem(
        "gaussian", level, cloud, g, True,
        {"length_scale": length_scale, "jitter": jitter},
    )


def build_problem(name: str, level: int, opts=None) -> ModelProblem:
    """
    Args:
        name (str): registered problem name, one of PROBLEMS.names()
        level (int): sphere refinement level, n = 8 * 4**level
        opts: namespace with dotted "problem.*" settings, may be None
    """
    try:
        builder = PROBLEMS.get(name)
    except KeyError as e:
        raise ConfigError(str(e)) from e
    return builder(level, opts)
