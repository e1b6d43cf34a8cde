from lowrank import RkMatrix, TruncationControl, rkadd, rk_restrict
from hmatrix.hmatrix import HMatrix
from utils.errors import DomainError


def rkupdate(alpha: float, r: RkMatrix, g: HMatrix, ctl: TruncationControl) -> None:
    """
    G|_{t x s} <- blocktrunc(G|_{t x s} + alpha R)

    Dense leaves get the exact sum, low-rank leaves a truncated rkadd,
    subdivided blocks recurse with restrictions of R.
    """
    if r.shape != g.shape:
        raise DomainError(f"Update of shape {r.shape} does not match block {g.shape}")
    if r.rank == 0:
        return

    if g.is_dense():
        g.dense += alpha * (r.a @ r.b.T)
        ctl.tally_leaf(g.block.key)
    elif g.is_lowrank():
        rkadd(alpha, r, g.rk, ctl)
        ctl.tally_leaf(g.block.key)
    else:
        for row in g.sons:
            for son in row:
                rkupdate(
                    alpha,
                    rk_restrict(r, son.row.slice_in(g.row), son.col.slice_in(g.col)),
                    son,
                    ctl,
                )
