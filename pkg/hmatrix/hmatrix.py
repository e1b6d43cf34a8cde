"""
H-matrix container: one payload per block of the block tree.

    inadmissible leaf -> dense nearfield matrix N_b
    admissible leaf   -> RkMatrix A_b B_b^*
    subdivided block  -> sons[i][j] over block.sons[i][j]
"""

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from lowrank import RkMatrix, TruncationControl, dense_to_rk
from trees import Block, BlockKind, block_transpose
from utils.errors import DomainError


class HMatrix(object):
    def __init__(
        self,
        block: Block,
        dense: Optional[np.ndarray] = None,
        rk: Optional[RkMatrix] = None,
        sons: Optional[List[List["HMatrix"]]] = None,
    ) -> None:
        super(HMatrix, self).__init__()

        #
        self.block = block
        self.dense = dense
        self.rk = rk
        self.sons = sons if sons is not None else []

        assert (dense is not None) == (block.kind is BlockKind.INADMISSIBLE), "dense payload only at inadmissible leaves"
        assert (rk is not None) == (block.kind is BlockKind.ADMISSIBLE), "low-rank payload only at admissible leaves"

    @property
    def shape(self):
        return self.block.shape

    @property
    def row(self):
        return self.block.row

    @property
    def col(self):
        return self.block.col

    def is_leaf(self) -> bool:
        return self.block.is_leaf()

    def is_dense(self) -> bool:
        return self.dense is not None

    def is_lowrank(self) -> bool:
        return self.rk is not None

    def son(self, i: int, j: int) -> "HMatrix":
        return self.sons[i][j]

    def copy(self) -> "HMatrix":
        return HMatrix(
            self.block,
            dense=None if self.dense is None else self.dense.copy(),
            rk=None if self.rk is None else self.rk.copy(),
            sons=[[son.copy() for son in row] for row in self.sons],
        )

    def __repr__(self) -> str:
        return f"HMatrix({self.block!r})"


def h_zero(block: Block) -> HMatrix:
    """ Zero dense leaves, rank-0 low-rank leaves """
    if block.kind is BlockKind.INADMISSIBLE:
        return HMatrix(block, dense=np.zeros(block.shape))
    if block.kind is BlockKind.ADMISSIBLE:
        return HMatrix(block, rk=RkMatrix.zeros(*block.shape))
    return HMatrix(block, sons=[[h_zero(son) for son in row] for row in block.sons])


def h_identity(block: Block) -> HMatrix:
    """ Identity over a block tree whose diagonal blocks end in dense leaves """
    g = h_zero(block)

    def _fill(h: HMatrix) -> None:
        if h.row is not h.col:
            return
        if h.is_dense():
            h.dense[...] = np.eye(h.shape[0])
        elif h.is_lowrank():
            raise DomainError("Diagonal block stored in low-rank form cannot hold the identity")
        for i, row in enumerate(h.sons):
            _fill(row[i])

    _fill(g)
    return g


def h_from_dense(block: Block, m: np.ndarray, ctl: TruncationControl) -> HMatrix:
    """
    Compress a dense matrix given in tree ordering: nearfield blocks are copied,
    admissible blocks truncated by SVD under ctl.
    """
    m = np.asarray(m, dtype=np.float64)
    if m.shape != block.shape:
        raise DomainError(f"Matrix shape {m.shape} does not match block {block.shape}")

    def _build(b: Block, sub: np.ndarray) -> HMatrix:
        if b.kind is BlockKind.INADMISSIBLE:
            return HMatrix(b, dense=sub.copy())
        if b.kind is BlockKind.ADMISSIBLE:
            return HMatrix(b, rk=dense_to_rk(sub, ctl))
        sons = [
            [_build(son, sub[son.row.slice_in(b.row), son.col.slice_in(b.col)]) for son in row]
            for row in b.sons
        ]
        return HMatrix(b, sons=sons)

    return _build(block, m)


def h_to_dense(g: HMatrix) -> np.ndarray:
    """ Assemble all leaves into one dense matrix over the block's index ranges """
    out = np.zeros(g.shape)

    def _fill(h: HMatrix, view: np.ndarray) -> None:
        if h.is_dense():
            view += h.dense
        elif h.is_lowrank():
            view += h.rk.to_dense()
        else:
            for row in h.sons:
                for son in row:
                    _fill(son, view[son.row.slice_in(h.row), son.col.slice_in(h.col)])

    _fill(g, out)
    return out


def h_transpose(g: HMatrix) -> HMatrix:
    """ Copy of G^* over the transposed block tree """

    def _build(h: HMatrix, block: Block) -> HMatrix:
        if h.is_dense():
            return HMatrix(block, dense=h.dense.T.copy())
        if h.is_lowrank():
            return HMatrix(block, rk=h.rk.adjoint().copy())
        n_rows, n_cols = len(h.sons), len(h.sons[0])
        sons = [[_build(h.sons[i][j], block.sons[j][i]) for i in range(n_rows)] for j in range(n_cols)]
        return HMatrix(block, sons=sons)

    return _build(g, block_transpose(g.block))


def h_assign(dst: HMatrix, src: HMatrix) -> None:
    """ Copy payloads of src into dst; both must have the same block structure """
    if dst.shape != src.shape or dst.block.kind is not src.block.kind:
        raise DomainError(f"Cannot assign {src!r} into {dst!r}")
    if dst.is_dense():
        dst.dense[...] = src.dense
    elif dst.is_lowrank():
        dst.rk.assign(src.rk.copy())
    else:
        for dst_row, src_row in zip(dst.sons, src.sons):
            for d, s in zip(dst_row, src_row):
                h_assign(d, s)


def h_clear(g: HMatrix) -> None:
    """ Set G to zero in place, keeping its structure """
    if g.is_dense():
        g.dense[...] = 0.0
    elif g.is_lowrank():
        g.rk.assign(RkMatrix.zeros(*g.shape))
    else:
        for row in g.sons:
            for son in row:
                h_clear(son)


@dataclass
class StorageStats:
    total_reals: int = 0
    dense_reals: int = 0
    lowrank_reals: int = 0
    max_rank: int = 0
    # level -> Counter(rank -> number of admissible leaves)
    rank_histogram: Dict[int, Counter] = field(default_factory=lambda: defaultdict(Counter))


def storage_stats(g: HMatrix) -> StorageStats:
    stats = StorageStats()
    stack = [g]
    while stack:
        h = stack.pop()
        if h.is_dense():
            stats.dense_reals += h.dense.size
        elif h.is_lowrank():
            stats.lowrank_reals += h.rk.storage()
            stats.max_rank = max(stats.max_rank, h.rk.rank)
            stats.rank_histogram[h.block.level][h.rk.rank] += 1
        else:
            for row in h.sons:
                stack.extend(row)
    stats.total_reals = stats.dense_reals + stats.lowrank_reals
    stats.rank_histogram = dict(stats.rank_histogram)
    return stats
