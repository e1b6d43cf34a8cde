"""
Truncation algebra for factorized low-rank matrices: best rank-k
approximation (svd_trunc), truncated addition (rkadd) and merging of
low-rank blocks (rowmerge / rkmerge).

After every truncation the left factor has orthonormal columns and the
singular values are carried by the right factor.
"""

from typing import List, Sequence, Tuple

import numpy as np
import scipy.linalg

from lowrank.rkmatrix import RkMatrix, TruncationControl
from utils.errors import DomainError


#### ************* DENSE KERNELS ************ ####

def thin_qr(m: np.ndarray, ctl: TruncationControl) -> Tuple[np.ndarray, np.ndarray]:
    """ Householder QR, Q with min(rows, cols) columns """
    ctl.count("qr_calls")
    return scipy.linalg.qr(m, mode="economic")


def thin_svd(m: np.ndarray, ctl: TruncationControl) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """ Thin SVD with descending singular values """
    ctl.count("svd_calls")
    try:
        return scipy.linalg.svd(m, full_matrices=False, lapack_driver="gesdd")
    except np.linalg.LinAlgError:
        # gesdd occasionally fails to converge where gesvd does not
        return scipy.linalg.svd(m, full_matrices=False, lapack_driver="gesvd")


def _recompress(a_hat: np.ndarray, ctl: TruncationControl) -> Tuple[np.ndarray, np.ndarray]:
    """
    a_hat = U S V^*, truncated to rank k.

    Returns:
        U[:, :k] and V[:, :k] S_k; the caller applies its orthonormal Q_B
    """
    u, sigma, vt = thin_svd(a_hat, ctl)
    k = ctl.choose_rank(sigma)
    return u[:, :k], vt[:k].T * sigma[:k]


#### ************* LOW-RANK OPERATIONS ************ ####

def svd_trunc(r: RkMatrix, ctl: TruncationControl) -> RkMatrix:
    """
    Best rank-k approximation of r.a @ r.b.T via QR of b and SVD of a R_B^*.
    """
    rows, cols = r.shape
    if r.rank == 0:
        return RkMatrix.zeros(rows, cols)
    q_b, r_b = thin_qr(r.b, ctl)
    u, w = _recompress(r.a @ r_b.T, ctl)
    return RkMatrix(u, q_b @ w)


def dense_to_rk(m: np.ndarray, ctl: TruncationControl) -> RkMatrix:
    """ Truncated SVD of a dense block """
    u, sigma, vt = thin_svd(m, ctl)
    k = ctl.choose_rank(sigma)
    return RkMatrix(u[:, :k].copy(), vt[:k].T * sigma[:k])


def rkadd(alpha: float, r1: RkMatrix, r2: RkMatrix, ctl: TruncationControl) -> None:
    """
    r2 <- trunc(r2 + alpha * r1), in place.

    Joint QR of [B D], SVD of [alpha A  C] R_B^*.
    """
    if r1.shape != r2.shape:
        raise DomainError(f"rkadd shape mismatch: {r1.shape} vs {r2.shape}")
    ctl.count("rkadd_calls")

    if r1.rank + r2.rank == 0:
        return
    q_b, r_b = thin_qr(np.hstack([r1.b, r2.b]), ctl)
    a_hat = np.hstack([alpha * r1.a, r2.a]) @ r_b.T
    u, w = _recompress(a_hat, ctl)
    r2.a, r2.b = u, q_b @ w


def rowmerge(parts: Sequence[RkMatrix], ctl: TruncationControl) -> RkMatrix:
    """
    Approximate the block row [R_1 ... R_p] of low-rank matrices sharing
    their row index set.
    """
    if len(parts) == 0:
        raise DomainError("rowmerge needs at least one part")
    rows = parts[0].shape[0]
    if any(part.shape[0] != rows for part in parts):
        raise DomainError("rowmerge parts must share their row count")

    widths = [part.shape[1] for part in parts]
    q_parts, a_parts = [], []
    for part in parts:
        if part.rank == 0:
            q_parts.append(np.zeros((part.shape[1], 0)))
            a_parts.append(np.zeros((rows, 0)))
            continue
        q_j, r_j = thin_qr(part.b, ctl)
        q_parts.append(q_j)
        a_parts.append(part.a @ r_j.T)

    a_hat = np.hstack(a_parts)
    if a_hat.shape[1] == 0:
        return RkMatrix.zeros(rows, sum(widths))

    u, w = _recompress(a_hat, ctl)
    b_blocks, start = [], 0
    for q_j in q_parts:
        stop = start + q_j.shape[1]
        b_blocks.append(q_j @ w[start:stop])
        start = stop
    return RkMatrix(u, np.vstack(b_blocks))


def _check_grid(grid: Sequence[Sequence[RkMatrix]]) -> None:
    if len(grid) == 0 or len(grid[0]) == 0:
        raise DomainError("rkmerge needs a nonempty grid")
    q = len(grid[0])
    if any(len(row) != q for row in grid):
        raise DomainError("rkmerge grid is ragged")
    for i, row in enumerate(grid):
        if any(block.shape[0] != row[0].shape[0] for block in row):
            raise DomainError(f"rkmerge grid row {i} has inconsistent heights")
    for j in range(q):
        if any(row[j].shape[1] != grid[0][j].shape[1] for row in grid):
            raise DomainError(f"rkmerge grid column {j} has inconsistent widths")


def rkmerge(grid: Sequence[Sequence[RkMatrix]], ctl: TruncationControl) -> RkMatrix:
    """
    Approximate the p x q block matrix (R_ij): merge every block column via
    rowmerge on adjoints, then merge the resulting columns.
    """
    _check_grid(grid)
    ctl.count("rkmerge_calls")

    columns: List[RkMatrix] = []
    for j in range(len(grid[0])):
        merged_adjoint = rowmerge([row[j].adjoint() for row in grid], ctl)
        columns.append(merged_adjoint.adjoint())
    return rowmerge(columns, ctl)


def _check_range(sl: slice, n: int, what: str) -> None:
    start, stop = sl.start, sl.stop
    if start is None or stop is None or sl.step not in (None, 1):
        raise DomainError(f"{what} subrange must be a contiguous slice with bounds, got {sl}")
    if not 0 <= start < stop <= n:
        raise DomainError(f"{what} subrange {start}:{stop} outside 0:{n} or empty")


def rk_restrict(r: RkMatrix, rows: slice, cols: slice) -> RkMatrix:
    """ R|_{rows x cols} as row-restricted copies of the factors """
    _check_range(rows, r.shape[0], "row")
    _check_range(cols, r.shape[1], "column")
    return RkMatrix(r.a[rows].copy(), r.b[cols].copy())
