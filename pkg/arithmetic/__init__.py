from .multiply import VARIANTS, MULTIPLY, hmul_standard, hmul_accumulated, get_multiply
from .invert import hinvert, hinvert_standard, h_inverse, dense_inverse
from .solve import lower_solve, upper_solve, lower_solve_right, upper_solve_right
from .factorize import FactorPair, hlr_decomp, hchol_decomp, dense_lr, dense_cholesky
from .precond import spectral_norm_estimate, precond_error
