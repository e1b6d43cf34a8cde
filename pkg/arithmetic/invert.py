"""
H-matrix inversion by block Gaussian elimination over a binary cluster tree.

For G = [[G11, G12], [G21, G22]] with scratch H of the same structure:

    G11 <- G11^{-1}
    H12 <- G11 G12,   H21 <- G21 G11
    G22 <- G22 - H21 G12,   G22 <- G22^{-1}
    G12 <- -H12 G22,  G21 <- -G22 H21
    G11 <- G11 - H12 G21

The accumulated variant carries one accumulator per diagonal block. Updates
to G22 that are still pending when the second inversion starts are passed
down in that accumulator and flushed at the leaves.
"""

import numpy as np
import scipy.linalg

from accumulator import Accumulator, acc_new, addproduct, acc_flush, acc_split
from hmatrix import HMatrix, h_clear, h_zero
from lowrank import EXACT, TruncationControl
from trees import Cluster
from utils import logger
from utils.errors import ContractError, NumericalError

from .multiply import VARIANTS, hmul_standard


def dense_inverse(a: np.ndarray, cluster: Cluster) -> np.ndarray:
    try:
        inv = scipy.linalg.inv(a, check_finite=False)
    except (scipy.linalg.LinAlgError, ValueError) as e:
        raise NumericalError(f"Singular diagonal leaf ({e})", cluster) from e
    if not np.all(np.isfinite(inv)):
        raise NumericalError("Non-finite inverse of diagonal leaf", cluster)
    return inv


def _check_diagonal(t: Cluster, g: HMatrix, h: HMatrix) -> None:
    if g.row.key != t.key or g.col.key != t.key:
        raise ContractError(f"{g!r} is not a diagonal block over {t!r}")
    if h.shape != g.shape:
        raise ContractError(f"Scratch {h!r} does not match {g!r}")
    if t.is_leaf():
        if not g.is_dense():
            raise ContractError(f"Diagonal leaf {g!r} must be stored densely")
        return
    if len(t.sons) != 2:
        raise ContractError(f"Inversion needs a binary cluster tree, {t!r} has {len(t.sons)} sons")
    if g.is_leaf() or h.is_leaf():
        raise ContractError(f"Diagonal block {g!r} over a non-leaf cluster must be subdivided")


def hinvert(t: Cluster, acc: Accumulator, g: HMatrix, h: HMatrix, ctl: TruncationControl) -> None:
    """
    G <- (G + content of acc)^{-1} in place, accumulated variant.

    Args:
        t (Cluster): cluster of the diagonal block
        acc (Accumulator): pending updates of G|_{t x t}, consumed
        g (HMatrix): matrix over (t, t)
        h (HMatrix): scratch over (t, t), overwritten
        ctl (TruncationControl): truncation rule
    """
    _check_diagonal(t, g, h)

    if t.is_leaf():
        acc_flush(acc, g, ctl)
        g.dense[...] = dense_inverse(g.dense, t)
        return

    #
    accs = acc_split(acc, ctl)
    acc.reset()
    t1, t2 = t.sons
    g11, g12 = g.sons[0]
    g21, g22 = g.sons[1]
    h11, h12 = h.sons[0]
    h21, h22 = h.sons[1]

    hinvert(t1, accs[0][0], g11, h11, ctl)

    acc_flush(accs[0][1], g12, ctl)
    acc_flush(accs[1][0], g21, ctl)
    h_clear(h12)
    h_clear(h21)
    addproduct(1.0, t1, g11, g12, accs[0][1], ctl)
    acc_flush(accs[0][1], h12, ctl)
    addproduct(1.0, t1, g21, g11, accs[1][0], ctl)
    acc_flush(accs[1][0], h21, ctl)

    addproduct(-1.0, t1, h21, g12, accs[1][1], ctl)
    hinvert(t2, accs[1][1], g22, h22, ctl)

    h_clear(g12)
    h_clear(g21)
    addproduct(-1.0, t2, h12, g22, accs[0][1], ctl)
    acc_flush(accs[0][1], g12, ctl)
    addproduct(-1.0, t2, g22, h21, accs[1][0], ctl)
    acc_flush(accs[1][0], g21, ctl)

    # accs[0][0] was consumed by the inversion of G11
    addproduct(-1.0, t2, h12, g21, accs[0][0], ctl)
    acc_flush(accs[0][0], g11, ctl)


def hinvert_standard(g: HMatrix, h: HMatrix, ctl: TruncationControl) -> None:
    """ G <- G^{-1} in place, every product truncated immediately """
    t = g.row
    _check_diagonal(t, g, h)

    if t.is_leaf():
        g.dense[...] = dense_inverse(g.dense, t)
        return

    g11, g12 = g.sons[0]
    g21, g22 = g.sons[1]
    h11, h12 = h.sons[0]
    h21, h22 = h.sons[1]

    hinvert_standard(g11, h11, ctl)
    h_clear(h12)
    hmul_standard(1.0, g11, g12, h12, ctl)
    h_clear(h21)
    hmul_standard(1.0, g21, g11, h21, ctl)

    hmul_standard(-1.0, h21, g12, g22, ctl)
    hinvert_standard(g22, h22, ctl)

    h_clear(g12)
    hmul_standard(-1.0, h12, g22, g12, ctl)
    h_clear(g21)
    hmul_standard(-1.0, g22, h21, g21, ctl)
    hmul_standard(-1.0, h12, g21, g11, ctl)


def h_inverse(g: HMatrix, ctl: TruncationControl = EXACT, variant: str = "accumulated") -> HMatrix:
    """ Invert g in place and return it """
    if variant not in VARIANTS:
        raise ContractError(f"Unknown variant {variant!r}, expected one of {VARIANTS}")
    if g.row.key != g.col.key:
        raise ContractError(f"{g!r} is not square over one cluster")

    logger.debug(f"Inverting {g!r} ({variant})")
    h = h_zero(g.block)
    if variant == "accumulated":
        hinvert(g.row, acc_new(g.row, g.col), g, h, ctl)
    else:
        hinvert_standard(g, h, ctl)
    return g
