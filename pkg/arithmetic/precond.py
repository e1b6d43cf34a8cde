"""
Power-iteration estimate of ||I - P G||_2 for a preconditioner P of G.
"""

from typing import Callable, Optional

import numpy as np

from utils import logger
from utils.errors import DomainError

Operator = Callable[[np.ndarray], np.ndarray]


def _start_vector(n: int, seed: int) -> np.ndarray:
    """ Alternating +-1, normalized; the seed fixes the sign of the first entry """
    signs = np.where((np.arange(n) + seed) % 2 == 0, 1.0, -1.0)
    return signs / np.sqrt(n)


def spectral_norm_estimate(
    apply: Operator,
    apply_adjoint: Optional[Operator],
    n: int,
    iterations: int = 20,
    seed: int = 0,
) -> float:
    """
    Estimate ||M||_2 by power iteration on M^* M.

    Args:
        apply: v -> M v
        apply_adjoint: v -> M^* v, M assumed self-adjoint when None
        n (int): dimension
        iterations (int): number of M^* M steps
        seed (int): seed of the start vector

    Returns:
        ||M x|| for the last normalized iterate x
    """
    if n < 1:
        raise DomainError(f"Dimension must be positive, got {n}")
    if iterations < 1:
        raise DomainError(f"Number of iterations must be positive, got {iterations}")
    apply_adjoint = apply if apply_adjoint is None else apply_adjoint

    x = _start_vector(n, seed)
    for _ in range(iterations):
        z = apply_adjoint(apply(x))
        norm = np.linalg.norm(z)
        if norm == 0.0:
            return 0.0
        x = z / norm
    return float(np.linalg.norm(apply(x)))


def precond_error(
    g_apply: Operator,
    precond_apply: Operator,
    n: int,
    iterations: int = 20,
    seed: int = 0,
    g_apply_adjoint: Optional[Operator] = None,
    precond_apply_adjoint: Optional[Operator] = None,
) -> float:
    """
    Estimate ||I - P G||_2. Adjoint applications default to the forward ones.
    """
    g_adj = g_apply if g_apply_adjoint is None else g_apply_adjoint
    p_adj = precond_apply if precond_apply_adjoint is None else precond_apply_adjoint

    def _forward(v: np.ndarray) -> np.ndarray:
        return v - precond_apply(g_apply(v))

    def _adjoint(v: np.ndarray) -> np.ndarray:
        return v - g_adj(p_adj(v))

    estimate = spectral_norm_estimate(_forward, _adjoint, n, iterations, seed)
    logger.debug(f"Preconditioner error estimate {estimate:.3e} after {iterations} iterations")
    return estimate
