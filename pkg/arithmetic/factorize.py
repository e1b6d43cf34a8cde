"""
H-LR and H-Cholesky factorizations without pivoting.

hlr_decomp overwrites G with L and R in combined storage: strict lower part
and lower off-diagonal blocks hold L (unit diagonal implied), the upper part
holds R. hchol_decomp overwrites G with the lower factor L, G = L L^T.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from accumulator import Accumulator, acc_new, addproduct, acc_flush, acc_split
from hmatrix import HMatrix, h_assign, h_clear, h_transpose, h_zero
from lowrank import EXACT, TruncationControl
from trees import Cluster
from utils import logger
from utils.errors import ContractError, NumericalError

from .multiply import VARIANTS, hmul_standard
from .solve import lower_solve, lower_solve_right, upper_solve, upper_solve_right


@dataclass
class FactorPair:
    """ L R for hlr_decomp, L with r=None for hchol_decomp (R = L^T) """

    l: HMatrix
    r: Optional[HMatrix] = None

    @property
    def is_cholesky(self) -> bool:
        return self.r is None

    def solve(self, v: np.ndarray) -> np.ndarray:
        """ Return (L R)^{-1} v """
        x = np.array(v, dtype=np.float64, copy=True)
        if self.is_cholesky:
            lower_solve(self.l, x, unit=False)
            lower_solve(self.l, x, unit=False, trans=True)
        else:
            lower_solve(self.l, x, unit=True)
            upper_solve(self.r, x)
        return x

    def solve_adjoint(self, v: np.ndarray) -> np.ndarray:
        """ Return (L R)^{-T} v """
        if self.is_cholesky:
            return self.solve(v)
        x = np.array(v, dtype=np.float64, copy=True)
        upper_solve(self.r, x, trans=True)
        lower_solve(self.l, x, unit=True, trans=True)
        return x


def dense_lr(a: np.ndarray, cluster: Cluster) -> np.ndarray:
    """ Unpivoted LR of a dense leaf in combined storage """
    a = np.array(a, dtype=np.float64, copy=True)
    n = a.shape[0]
    for k in range(n):
        pivot = a[k, k]
        if pivot == 0.0 or not np.isfinite(pivot):
            raise NumericalError(f"Zero pivot in row {k} of an LR leaf", cluster)
        a[k + 1:, k] /= pivot
        a[k + 1:, k + 1:] -= np.outer(a[k + 1:, k], a[k, k + 1:])
    return a


def dense_cholesky(a: np.ndarray, cluster: Cluster) -> np.ndarray:
    try:
        l = scipy.linalg.cholesky(a, lower=True, check_finite=False)
    except scipy.linalg.LinAlgError as e:
        raise NumericalError(f"Non-positive pivot in a Cholesky leaf ({e})", cluster) from e
    if not np.all(np.isfinite(l)):
        raise NumericalError("Non-finite Cholesky factor", cluster)
    return np.tril(l)


def _check_diagonal(g: HMatrix) -> None:
    t = g.row
    if g.row.key != g.col.key:
        raise ContractError(f"{g!r} is not a diagonal block")
    if t.is_leaf():
        if not g.is_dense():
            raise ContractError(f"Diagonal leaf {g!r} must be stored densely")
        return
    if len(t.sons) != 2:
        raise ContractError(f"Factorizations need a binary cluster tree, {t!r} has {len(t.sons)} sons")
    if g.is_leaf():
        raise ContractError(f"Diagonal block {g!r} over a non-leaf cluster must be subdivided")


#
# LR
#
def _lr_accumulated(acc: Accumulator, g: HMatrix, ctl: TruncationControl) -> None:
    _check_diagonal(g)
    t = g.row
    if t.is_leaf():
        acc_flush(acc, g, ctl)
        g.dense[...] = dense_lr(g.dense, t)
        return

    accs = acc_split(acc, ctl)
    acc.reset()
    g11, g12 = g.sons[0]
    g21, g22 = g.sons[1]

    _lr_accumulated(accs[0][0], g11, ctl)
    acc_flush(accs[0][1], g12, ctl)
    acc_flush(accs[1][0], g21, ctl)
    lower_solve(g11, g12, ctl, unit=True, variant="accumulated")
    upper_solve_right(g11, g21, ctl, variant="accumulated")

    addproduct(-1.0, t.sons[0], g21, g12, accs[1][1], ctl)
    _lr_accumulated(accs[1][1], g22, ctl)


def _lr_standard(g: HMatrix, ctl: TruncationControl) -> None:
    _check_diagonal(g)
    if g.row.is_leaf():
        g.dense[...] = dense_lr(g.dense, g.row)
        return

    g11, g12 = g.sons[0]
    g21, g22 = g.sons[1]
    _lr_standard(g11, ctl)
    lower_solve(g11, g12, ctl, unit=True, variant="standard")
    upper_solve_right(g11, g21, ctl, variant="standard")
    hmul_standard(-1.0, g21, g12, g22, ctl)
    _lr_standard(g22, ctl)


def _triangular_part(g: HMatrix, lower: bool) -> HMatrix:
    """ Copy of L (unit diagonal) or R out of combined LR storage """
    out = h_zero(g.block)

    def _fill(src: HMatrix, dst: HMatrix) -> None:
        if src.is_dense():
            if lower:
                dst.dense[...] = np.tril(src.dense, -1) + np.eye(src.shape[0])
            else:
                dst.dense[...] = np.triu(src.dense)
            return
        n = len(src.sons)
        for i in range(n):
            for j in range(n):
                if i == j:
                    _fill(src.sons[i][j], dst.sons[i][j])
                elif (i > j) == lower:
                    h_assign(dst.sons[i][j], src.sons[i][j])

    _fill(g, out)
    return out


def hlr_decomp(g: HMatrix, ctl: TruncationControl = EXACT, variant: str = "accumulated") -> FactorPair:
    """
    Factor G = L R in place (combined storage in g).

    Returns:
        FactorPair with separate copies of L and R
    """
    if variant not in VARIANTS:
        raise ContractError(f"Unknown variant {variant!r}, expected one of {VARIANTS}")
    logger.debug(f"LR factorization of {g!r} ({variant})")
    if variant == "accumulated":
        _lr_accumulated(acc_new(g.row, g.col), g, ctl)
    else:
        _lr_standard(g, ctl)
    return FactorPair(_triangular_part(g, lower=True), _triangular_part(g, lower=False))


#
# Cholesky
#
def _chol_accumulated(acc: Accumulator, g: HMatrix, ctl: TruncationControl) -> None:
    _check_diagonal(g)
    t = g.row
    if t.is_leaf():
        acc_flush(acc, g, ctl)
        g.dense[...] = dense_cholesky(g.dense, t)
        return

    accs = acc_split(acc, ctl)
    acc.reset()
    g11, g12 = g.sons[0]
    g21, g22 = g.sons[1]

    _chol_accumulated(accs[0][0], g11, ctl)
    acc_flush(accs[1][0], g21, ctl)
    lower_solve_right(g11, g21, ctl, unit=False, trans=True, variant="accumulated")

    addproduct(-1.0, t.sons[0], g21, h_transpose(g21), accs[1][1], ctl)
    _chol_accumulated(accs[1][1], g22, ctl)

    # the upper triangle is not referenced; accs[0][1] is dropped with it
    h_clear(g12)


def _chol_standard(g: HMatrix, ctl: TruncationControl) -> None:
    _check_diagonal(g)
    if g.row.is_leaf():
        g.dense[...] = dense_cholesky(g.dense, g.row)
        return

    g11, g12 = g.sons[0]
    g21, g22 = g.sons[1]
    _chol_standard(g11, ctl)
    lower_solve_right(g11, g21, ctl, unit=False, trans=True, variant="standard")
    hmul_standard(-1.0, g21, h_transpose(g21), g22, ctl)
    _chol_standard(g22, ctl)
    h_clear(g12)


def hchol_decomp(g: HMatrix, ctl: TruncationControl = EXACT, variant: str = "accumulated") -> FactorPair:
    """
    Factor a symmetric positive definite G = L L^T in place; only the lower
    triangle of G is read.
    """
    if variant not in VARIANTS:
        raise ContractError(f"Unknown variant {variant!r}, expected one of {VARIANTS}")
    logger.debug(f"Cholesky factorization of {g!r} ({variant})")
    if variant == "accumulated":
        _chol_accumulated(acc_new(g.row, g.col), g, ctl)
    else:
        _chol_standard(g, ctl)
    return FactorPair(g)
