from .sphere import SurfacePointCloud, sphere_cloud, octahedron_faces, refine_faces, spherical_triangle_area
from .kernels import slp_matrix, slp_matrix_with_scale, dlp_matrix, gaussian_matrix
from .builders import PROBLEMS, ModelProblem, build_problem
