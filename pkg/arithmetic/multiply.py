"""
H-matrix multiplication Z <- Z + alpha X Y, in two variants.

standard:     every leaf product is truncated into Z as soon as it is formed
accumulated:  products are collected per block and each leaf of Z is
              truncated once, when the accumulator is flushed
"""

from typing import Callable, Dict

from accumulator import acc_new, addproduct, acc_flush, product_to_rk
from accumulator import virtual_sons, collect_virtual_sons
from hmatrix import HMatrix, rkupdate
from lowrank import TruncationControl
from utils.errors import DomainError

VARIANTS = ("standard", "accumulated")


def _check_compatible(x: HMatrix, y: HMatrix, z: HMatrix) -> None:
    if x.col.key != y.row.key:
        raise DomainError(f"Inner clusters of {x!r} and {y!r} differ")
    if z.row.key != x.row.key or z.col.key != y.col.key:
        raise DomainError(f"Target {z!r} does not match the product of {x!r} and {y!r}")


def hmul_standard(alpha: float, x: HMatrix, y: HMatrix, z: HMatrix, ctl: TruncationControl) -> None:
    """
    Args:
        alpha (float): scaling factor
        x (HMatrix): factor over (t, s)
        y (HMatrix): factor over (s, r)
        z (HMatrix): target over (t, r), updated in place
        ctl (TruncationControl): truncation applied to every intermediate update
    """
    _check_compatible(x, y, z)
    if alpha == 0.0:
        return
    _mul_standard(alpha, x, y, z, ctl)


def _mul_standard(alpha: float, x: HMatrix, y: HMatrix, z: HMatrix, ctl: TruncationControl) -> None:
    product = product_to_rk(x, y, ctl)
    if product is not None:
        rkupdate(alpha, product, z, ctl)
        return

    if len(x.sons[0]) != len(y.sons):
        raise DomainError(f"Son grids of {x!r} and {y!r} do not match")

    # both factors subdivided; a leaf target gets temporary sons
    targets = z.sons if not z.is_leaf() else virtual_sons(z)
    for i, x_row in enumerate(x.sons):
        for k, x_son in enumerate(x_row):
            for j, y_son in enumerate(y.sons[k]):
                _mul_standard(alpha, x_son, y_son, targets[i][j], ctl)

    if z.is_leaf():
        collect_virtual_sons(z, targets, ctl)


def hmul_accumulated(alpha: float, x: HMatrix, y: HMatrix, z: HMatrix, ctl: TruncationControl) -> None:
    """ Same contract as hmul_standard, one truncation per leaf of z """
    _check_compatible(x, y, z)
    if alpha == 0.0:
        return
    acc = acc_new(z.row, z.col)
    addproduct(alpha, x.col, x, y, acc, ctl)
    acc_flush(acc, z, ctl)


MULTIPLY: Dict[str, Callable[[float, HMatrix, HMatrix, HMatrix, TruncationControl], None]] = {
    "standard": hmul_standard,
    "accumulated": hmul_accumulated,
}


def get_multiply(variant: str):
    if variant not in MULTIPLY:
        raise DomainError(f"Unknown variant {variant!r}, expected one of {VARIANTS}")
    return MULTIPLY[variant]
