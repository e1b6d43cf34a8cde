"""
Accumulated updates for H-matrix products.

An accumulator for a block (t, r) holds a low-rank matrix rhat with the
products already reduced to low rank, and a list of pending products
alpha X|_{t x s} Y|_{s x r} whose factors are both subdivided. Pending
products keep references to X and Y: the factors must not be modified while
an accumulator referencing them is alive.
"""

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from hmatrix import HMatrix, addeval, addevaltrans, rkupdate
from lowrank import RkMatrix, TruncationControl, rkadd, rk_restrict, rkmerge
from trees import Block, BlockKind, Cluster
from utils.errors import ContractError, DomainError


@dataclass
class PendingProduct:
    alpha: float
    mid: Cluster
    x: HMatrix
    y: HMatrix


@dataclass
class Accumulator:
    row: Cluster
    col: Cluster
    rhat: RkMatrix
    pending: List[PendingProduct] = field(default_factory=list)

    def is_empty(self) -> bool:
        return self.rhat.rank == 0 and not self.pending

    def reset(self) -> None:
        self.rhat = RkMatrix.zeros(self.row.size, self.col.size)
        self.pending = []

    def __repr__(self) -> str:
        return "Accumulator(rows={}:{}, cols={}:{}, rank={}, pending={})".format(
            self.row.offset, self.row.index_set.stop,
            self.col.offset, self.col.index_set.stop,
            self.rhat.rank, len(self.pending),
        )


def acc_new(t: Cluster, r: Cluster) -> Accumulator:
    return Accumulator(t, r, RkMatrix.zeros(t.size, r.size))


def product_to_rk(x: HMatrix, y: HMatrix, ctl: Optional[TruncationControl] = None) -> Optional[RkMatrix]:
    """
    Factorized form A B^* of X|_{t x s} Y|_{s x r} when one factor is a leaf,
    None when both are subdivided. The scaling factor is not applied here.

    With ctl given, the auxiliary multi-vectors are capped at #K <= k: the
    largest leaf cluster for a dense factor, ctl.max_rank for a low-rank one.
    """
    t_size, s_size, r_size = x.shape[0], x.shape[1], y.shape[1]
    leaf_bound = rank_bound = None
    if ctl is not None:
        leaf_bound = max(x.row.max_leaf_size, x.col.max_leaf_size, y.col.max_leaf_size)
        rank_bound = ctl.max_rank

    if x.is_dense():
        if t_size <= s_size:
            a_hat = np.eye(t_size)
            b_hat = np.zeros((r_size, t_size))
            addevaltrans(1.0, y, np.ascontiguousarray(x.dense.T), b_hat, leaf_bound)
        else:
            a_hat = x.dense.copy()
            b_hat = np.zeros((r_size, s_size))
            addevaltrans(1.0, y, np.eye(s_size), b_hat, leaf_bound)
        return RkMatrix(a_hat, b_hat)

    if y.is_dense():
        if r_size <= s_size:
            b_hat = np.eye(r_size)
            a_hat = np.zeros((t_size, r_size))
            addeval(1.0, x, y.dense, a_hat, leaf_bound)
        else:
            b_hat = np.ascontiguousarray(y.dense.T)
            a_hat = np.zeros((t_size, s_size))
            addeval(1.0, x, np.eye(s_size), a_hat, leaf_bound)
        return RkMatrix(a_hat, b_hat)

    if x.is_lowrank():
        a_hat = x.rk.a.copy()
        b_hat = np.zeros((r_size, x.rk.rank))
        addevaltrans(1.0, y, x.rk.b, b_hat, rank_bound)
        return RkMatrix(a_hat, b_hat)

    if y.is_lowrank():
        b_hat = y.rk.b.copy()
        a_hat = np.zeros((t_size, y.rk.rank))
        addeval(1.0, x, y.rk.a, a_hat, rank_bound)
        return RkMatrix(a_hat, b_hat)

    return None


def _check_product(s: Cluster, x: HMatrix, y: HMatrix, t: Cluster, r: Cluster) -> None:
    if x.row.key != t.key or x.col.key != s.key:
        raise ContractError(f"Factor {x!r} is not over ({t!r}, {s!r})")
    if y.row.key != s.key or y.col.key != r.key:
        raise ContractError(f"Factor {y!r} is not over ({s!r}, {r!r})")


def addproduct(
    alpha: float,
    s: Cluster,
    x: HMatrix,
    y: HMatrix,
    acc: Accumulator,
    ctl: TruncationControl,
) -> None:
    """
    Add alpha X|_{t x s} Y|_{s x r} to the accumulator of (t, r): evaluated
    into rhat if one factor is a leaf, deferred as pending otherwise.
    """
    _check_product(s, x, y, acc.row, acc.col)
    ctl.count("addproduct_calls")

    product = product_to_rk(x, y, ctl)
    if product is None:
        acc.pending.append(PendingProduct(alpha, s, x, y))
    else:
        rkadd(alpha, product, acc.rhat, ctl)


def acc_split(acc: Accumulator, ctl: TruncationControl) -> List[List[Accumulator]]:
    """
    Accumulators for sons(t) x sons(r), each starting from the restriction of
    rhat and absorbing the son products of every pending product.
    The parent accumulator is left untouched.
    """
    t, r = acc.row, acc.col
    if t.is_leaf() or r.is_leaf():
        raise ContractError(f"Cannot split {acc!r}: row or column cluster is a leaf")
    for product in acc.pending:
        if product.mid.is_leaf() or not product.x.sons or not product.y.sons:
            raise ContractError(f"Pending product over {product.mid!r} cannot be split")

    sons = []
    for i, t_son in enumerate(t.sons):
        row = []
        for j, r_son in enumerate(r.sons):
            son_acc = Accumulator(
                t_son, r_son,
                rk_restrict(acc.rhat, t_son.slice_in(t), r_son.slice_in(r)),
            )
            for product in acc.pending:
                for k, s_son in enumerate(product.mid.sons):
                    addproduct(
                        product.alpha, s_son,
                        product.x.sons[i][k], product.y.sons[k][j],
                        son_acc, ctl,
                    )
            row.append(son_acc)
        sons.append(row)
    return sons


def virtual_sons(z: HMatrix) -> List[List[HMatrix]]:
    """ Temporary copies of Z|_{t' x r'} for a leaf Z, in Z's representation """
    kind = BlockKind.INADMISSIBLE if z.is_dense() else BlockKind.ADMISSIBLE
    temps = []
    for t_son in z.row.sons:
        row = []
        for r_son in z.col.sons:
            block = Block(t_son, r_son, kind, level=z.block.level + 1)
            rows, cols = t_son.slice_in(z.row), r_son.slice_in(z.col)
            if z.is_dense():
                row.append(HMatrix(block, dense=z.dense[rows, cols].copy()))
            else:
                row.append(HMatrix(block, rk=rk_restrict(z.rk, rows, cols)))
        temps.append(row)
    return temps


def collect_virtual_sons(z: HMatrix, temps: List[List[HMatrix]], ctl: TruncationControl) -> None:
    """ Write temporaries back into the leaf Z: copy for dense, rkmerge for low rank """
    if z.is_dense():
        for row in temps:
            for temp in row:
                z.dense[temp.row.slice_in(z.row), temp.col.slice_in(z.col)] = temp.dense
    else:
        z.rk.assign(rkmerge([[temp.rk for temp in row] for row in temps], ctl))
    ctl.tally_leaf(z.block.key)


def acc_flush(acc: Accumulator, z: HMatrix, ctl: TruncationControl) -> None:
    """
    Z|_{t x r} <- blocktrunc(Z|_{t x r} + content of acc), then reset acc.
    """
    if z.row.key != acc.row.key or z.col.key != acc.col.key:
        raise DomainError(f"Cannot flush {acc!r} into {z!r}")
    ctl.count("flush_calls")

    if not acc.pending:
        rkupdate(1.0, acc.rhat, z, ctl)
    elif not z.is_leaf():
        sons = acc_split(acc, ctl)
        for i, row in enumerate(sons):
            for j, son_acc in enumerate(row):
                acc_flush(son_acc, z.sons[i][j], ctl)
        del sons
    else:
        temps = virtual_sons(z)
        sons = acc_split(acc, ctl)
        for i, row in enumerate(sons):
            for j, son_acc in enumerate(row):
                acc_flush(son_acc, temps[i][j], ctl)
        del sons

        collect_virtual_sons(z, temps, ctl)
        del temps

    acc.reset()
