"""
Triangular solves with H-matrices.

The triangular factor T is an H-matrix over (t, t) with a binary cluster
tree; only the triangle selected by `lower` is read, so the combined storage
produced by hlr_decomp can be passed directly. `trans` solves with T^T,
`unit` assumes an implicit unit diagonal.

Right-hand sides are either multi-vectors (updated in place) or H-matrices
over (t, r) (left solves) or (r, t) (right solves), updated in place with
products computed by the chosen multiplication variant.
"""

from typing import Union

import numpy as np
import scipy.linalg

from hmatrix import HMatrix, addeval, addevaltrans, h_transpose
from lowrank import EXACT, TruncationControl
from utils.errors import ContractError, NumericalError

from .multiply import get_multiply


def _diagonal_sons(tri: HMatrix):
    if tri.is_lowrank():
        raise ContractError(f"Triangular block {tri!r} is stored in low-rank form")
    if len(tri.sons) != 2 or len(tri.sons[0]) != 2:
        raise ContractError(f"Triangular solves need a binary cluster tree, got {tri!r}")
    return tri.sons


def _solve_dense(d: np.ndarray, x: np.ndarray, lower: bool, trans: bool, unit: bool, tri: HMatrix) -> None:
    if not unit and np.any(np.diag(d) == 0.0):
        raise NumericalError("Zero on the diagonal of a triangular leaf", tri.row)
    x[...] = scipy.linalg.solve_triangular(d, x, lower=lower, trans=1 if trans else 0, unit_diagonal=unit)


def _solve_vec(tri: HMatrix, x: np.ndarray, lower: bool, trans: bool, unit: bool) -> None:
    """ x <- op(T)^{-1} x in place """
    if tri.is_dense():
        _solve_dense(tri.dense, x, lower, trans, unit, tri)
        return

    sons = _diagonal_sons(tri)
    n1 = sons[0][0].shape[0]
    x1, x2 = x[:n1], x[n1:]

    if lower != trans:
        # op(T) is lower triangular
        _solve_vec(sons[0][0], x1, lower, trans, unit)
        if trans:
            addevaltrans(-1.0, sons[0][1], x1, x2)
        else:
            addeval(-1.0, sons[1][0], x1, x2)
        _solve_vec(sons[1][1], x2, lower, trans, unit)
    else:
        _solve_vec(sons[1][1], x2, lower, trans, unit)
        if trans:
            addevaltrans(-1.0, sons[1][0], x2, x1)
        else:
            addeval(-1.0, sons[0][1], x2, x1)
        _solve_vec(sons[0][0], x1, lower, trans, unit)


def _op_off_diagonal(tri: HMatrix, i: int, j: int, trans: bool) -> HMatrix:
    """ Block (i, j) of op(T) """
    return h_transpose(tri.sons[j][i]) if trans else tri.sons[i][j]


def _solve_left(tri: HMatrix, b: HMatrix, lower: bool, trans: bool, unit: bool,
                ctl: TruncationControl, variant: str) -> None:
    """ B <- op(T)^{-1} B, B over (t, r) """
    if b.is_dense():
        _solve_vec(tri, b.dense, lower, trans, unit)
        return
    if b.is_lowrank():
        if b.rk.rank > 0:
            b.rk.a = b.rk.a.copy()
            _solve_vec(tri, b.rk.a, lower, trans, unit)
        return

    sons = _diagonal_sons(tri)
    multiply = get_multiply(variant)
    forward = lower != trans
    for j in range(len(b.sons[0])):
        b1, b2 = b.sons[0][j], b.sons[1][j]
        if forward:
            _solve_left(sons[0][0], b1, lower, trans, unit, ctl, variant)
            multiply(-1.0, _op_off_diagonal(tri, 1, 0, trans), b1, b2, ctl)
            _solve_left(sons[1][1], b2, lower, trans, unit, ctl, variant)
        else:
            _solve_left(sons[1][1], b2, lower, trans, unit, ctl, variant)
            multiply(-1.0, _op_off_diagonal(tri, 0, 1, trans), b2, b1, ctl)
            _solve_left(sons[0][0], b1, lower, trans, unit, ctl, variant)


def _solve_right(tri: HMatrix, b: HMatrix, lower: bool, trans: bool, unit: bool,
                 ctl: TruncationControl, variant: str) -> None:
    """ B <- B op(T)^{-1}, B over (r, t) """
    if b.is_dense():
        _solve_vec(tri, b.dense.T, lower, not trans, unit)
        return
    if b.is_lowrank():
        if b.rk.rank > 0:
            b.rk.b = b.rk.b.copy()
            _solve_vec(tri, b.rk.b, lower, not trans, unit)
        return

    sons = _diagonal_sons(tri)
    multiply = get_multiply(variant)
    forward = lower == trans
    for b_row in b.sons:
        b1, b2 = b_row
        if forward:
            # op(T) upper: X1 first, then X2 from B2 - X1 op(T)_12
            _solve_right(sons[0][0], b1, lower, trans, unit, ctl, variant)
            multiply(-1.0, b1, _op_off_diagonal(tri, 0, 1, trans), b2, ctl)
            _solve_right(sons[1][1], b2, lower, trans, unit, ctl, variant)
        else:
            _solve_right(sons[1][1], b2, lower, trans, unit, ctl, variant)
            multiply(-1.0, b2, _op_off_diagonal(tri, 1, 0, trans), b1, ctl)
            _solve_right(sons[0][0], b1, lower, trans, unit, ctl, variant)


Rhs = Union[np.ndarray, HMatrix]


def _dispatch(tri: HMatrix, b: Rhs, lower: bool, trans: bool, unit: bool, right: bool,
              ctl: TruncationControl, variant: str) -> Rhs:
    if isinstance(b, HMatrix):
        if right:
            _solve_right(tri, b, lower, trans, unit, ctl, variant)
        else:
            _solve_left(tri, b, lower, trans, unit, ctl, variant)
        return b

    # X op(T) = B is op(T)^T X^T = B^T
    if b.ndim == 1:
        x = b[:, None]
    else:
        x = b.T if right else b
    _solve_vec(tri, x, lower, trans != right, unit)
    return b


def lower_solve(l: HMatrix, b: Rhs, ctl: TruncationControl = EXACT, unit: bool = True,
                trans: bool = False, variant: str = "accumulated") -> Rhs:
    """
    Solve L X = B (or L^T X = B with trans) in place.

    Args:
        l (HMatrix): lower triangular factor over (t, t)
        b: multi-vector (#t, K) / vector (#t,), or H-matrix over (t, r)
        unit (bool): implicit unit diagonal
    """
    return _dispatch(l, b, True, trans, unit, False, ctl, variant)


def upper_solve(r: HMatrix, b: Rhs, ctl: TruncationControl = EXACT, unit: bool = False,
                trans: bool = False, variant: str = "accumulated") -> Rhs:
    """ Solve R X = B (or R^T X = B with trans) in place """
    return _dispatch(r, b, False, trans, unit, False, ctl, variant)


def lower_solve_right(l: HMatrix, b: Rhs, ctl: TruncationControl = EXACT, unit: bool = True,
                      trans: bool = False, variant: str = "accumulated") -> Rhs:
    """ Solve X L = B (or X L^T = B with trans) in place; b is (K, #t) or over (r, t) """
    return _dispatch(l, b, True, trans, unit, True, ctl, variant)


def upper_solve_right(r: HMatrix, b: Rhs, ctl: TruncationControl = EXACT, unit: bool = False,
                      trans: bool = False, variant: str = "accumulated") -> Rhs:
    """ Solve X R = B (or X R^T = B with trans) in place """
    return _dispatch(r, b, False, trans, unit, True, ctl, variant)
