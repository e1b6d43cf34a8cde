"""
Exact products of an H-matrix with multi-vectors:

    addeval:       Y <- Y + alpha G|_{t x s} X
    addevaltrans:  X <- X + alpha G|_{t x s}^* Y

Multi-vectors are 2-d arrays in tree ordering, rows indexed by the cluster.
Son calls receive views, so updates land in the caller's arrays.
"""

from typing import Optional

import numpy as np

from hmatrix.hmatrix import HMatrix
from utils.errors import ContractError, DomainError


def _check(rows_expected: int, x: np.ndarray, what: str, col_bound: Optional[int]) -> None:
    if x.ndim != 2 or x.shape[0] != rows_expected:
        raise DomainError(f"{what} has shape {x.shape}, expected {rows_expected} rows")
    if col_bound is not None and x.shape[1] > col_bound:
        raise ContractError(f"{what} has {x.shape[1]} columns, more than the bound {col_bound}")


def addeval(alpha: float, g: HMatrix, x: np.ndarray, y: np.ndarray, col_bound: Optional[int] = None) -> None:
    """
    Args:
        alpha (float): scaling factor
        g (HMatrix): matrix over block (t, s)
        x (np.ndarray): (#s, K) input
        y (np.ndarray): (#t, K) output, updated in place
        col_bound (int): optional cap on #K
    """
    _check(g.shape[1], x, "x", col_bound)
    _check(g.shape[0], y, "y", col_bound)
    if x.shape[1] != y.shape[1]:
        raise DomainError(f"x has {x.shape[1]} columns but y has {y.shape[1]}")
    _addeval(alpha, g, x, y)


def _addeval(alpha: float, g: HMatrix, x: np.ndarray, y: np.ndarray) -> None:
    if g.is_dense():
        y += alpha * (g.dense @ x)
    elif g.is_lowrank():
        if g.rk.rank > 0:
            z = alpha * (g.rk.b.T @ x)
            y += g.rk.a @ z
    else:
        for row in g.sons:
            for son in row:
                _addeval(
                    alpha, son,
                    x[son.col.slice_in(g.col)],
                    y[son.row.slice_in(g.row)],
                )


def addevaltrans(alpha: float, g: HMatrix, y: np.ndarray, x: np.ndarray, col_bound: Optional[int] = None) -> None:
    """
    Args:
        alpha (float): scaling factor
        g (HMatrix): matrix over block (t, s)
        y (np.ndarray): (#t, K) input
        x (np.ndarray): (#s, K) output, updated in place
        col_bound (int): optional cap on #K
    """
    _check(g.shape[0], y, "y", col_bound)
    _check(g.shape[1], x, "x", col_bound)
    if x.shape[1] != y.shape[1]:
        raise DomainError(f"y has {y.shape[1]} columns but x has {x.shape[1]}")
    _addevaltrans(alpha, g, y, x)


def _addevaltrans(alpha: float, g: HMatrix, y: np.ndarray, x: np.ndarray) -> None:
    if g.is_dense():
        x += alpha * (g.dense.T @ y)
    elif g.is_lowrank():
        if g.rk.rank > 0:
            z = alpha * (g.rk.a.T @ y)
            x += g.rk.b @ z
    else:
        for row in g.sons:
            for son in row:
                _addevaltrans(
                    alpha, son,
                    y[son.row.slice_in(g.row)],
                    x[son.col.slice_in(g.col)],
                )


def matvec(g: HMatrix, v: np.ndarray) -> np.ndarray:
    """ G v for a vector or multi-vector """
    v2 = v.reshape(v.shape[0], -1)
    out = np.zeros((g.shape[0], v2.shape[1]))
    _addeval(1.0, g, v2, out)
    return out.reshape((g.shape[0],) + v.shape[1:])


def rmatvec(g: HMatrix, v: np.ndarray) -> np.ndarray:
    """ G^* v for a vector or multi-vector """
    v2 = v.reshape(v.shape[0], -1)
    out = np.zeros((g.shape[1], v2.shape[1]))
    _addevaltrans(1.0, g, v2, out)
    return out.reshape((g.shape[1],) + v.shape[1:])
