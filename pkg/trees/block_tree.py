"""
Block trees T_{I x J} built from two cluster trees and the
min-diameter admissibility condition.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, List, Tuple

from trees.cluster_tree import Cluster
from utils.errors import DomainError


class BlockKind(Enum):
    ADMISSIBLE = "admissible_leaf"
    INADMISSIBLE = "inadmissible_leaf"
    SUBDIVIDED = "subdivided"


@dataclass(eq=False)
class Block:
    row: Cluster
    col: Cluster
    kind: BlockKind
    # sons[i][j] is the block (row.sons[i], col.sons[j])
    sons: List[List["Block"]] = field(default_factory=list)
    level: int = 0

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.row.size, self.col.size)

    @property
    def key(self) -> Tuple[int, int, int, int]:
        return (self.row.offset, self.row.size, self.col.offset, self.col.size)

    def is_leaf(self) -> bool:
        return self.kind is not BlockKind.SUBDIVIDED

    def son(self, i: int, j: int) -> "Block":
        return self.sons[i][j]

    def iter_sons(self) -> Iterator[Tuple[int, int, "Block"]]:
        """ Row-major over sons(t) x sons(s) """
        for i, row in enumerate(self.sons):
            for j, son in enumerate(row):
                yield i, j, son

    def __repr__(self) -> str:
        return "Block(rows={}:{}, cols={}:{}, kind={}, level={})".format(
            self.row.offset, self.row.index_set.stop,
            self.col.offset, self.col.index_set.stop,
            self.kind.value, self.level,
        )


def is_admissible(t: Cluster, s: Cluster, eta: float) -> bool:
    """
    min(diam(t), diam(s)) <= eta * dist(t, s); touching boxes never qualify
    """
    dist = t.distance(s)
    if dist <= 0.0:
        return False
    return min(t.diameter(), s.diameter()) <= eta * dist


def build_block_tree(row: Cluster, col: Cluster, eta: float) -> Block:
    """
    Args:
        row (Cluster): root of the row cluster tree
        col (Cluster): root of the column cluster tree
        eta (float): admissibility parameter, eta > 0

    Returns:
        root Block of T_{row x col}
    """

    if not eta > 0.0:
        raise DomainError(f"eta must be positive, got {eta}")

    def _build(t: Cluster, s: Cluster, level: int) -> Block:
        if is_admissible(t, s, eta):
            return Block(t, s, BlockKind.ADMISSIBLE, level=level)
        if t.is_leaf() or s.is_leaf():
            return Block(t, s, BlockKind.INADMISSIBLE, level=level)
        block = Block(t, s, BlockKind.SUBDIVIDED, level=level)
        block.sons = [[_build(ts, ss, level + 1) for ss in s.sons] for ts in t.sons]
        return block

    return _build(row, col, 0)


def block_transpose(block: Block) -> Block:
    """ Block tree of the adjoint matrix: T_{J x I} mirrored from T_{I x J} """
    transposed = Block(block.col, block.row, block.kind, level=block.level)
    if block.sons:
        n_rows, n_cols = len(block.sons), len(block.sons[0])
        transposed.sons = [
            [block_transpose(block.sons[i][j]) for i in range(n_rows)]
            for j in range(n_cols)
        ]
    return transposed


def iter_blocks(root: Block) -> Iterator[Block]:
    """ Pre-order traversal, row-major over sons """
    stack = [root]
    while stack:
        block = stack.pop()
        yield block
        for row in reversed(block.sons):
            stack.extend(reversed(row))


def iter_leaves(root: Block) -> Iterator[Block]:
    return (block for block in iter_blocks(root) if block.is_leaf())
