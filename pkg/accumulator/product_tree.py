"""
Product trees: the triples (t, s, r) visited by an accumulated
multiplication of H-matrices over T_{I x J} and T_{J x K}.
"""

from dataclasses import dataclass, field
from typing import Iterator, List

from trees import Block, Cluster
from utils.errors import ContractError


@dataclass(eq=False)
class ProductNode:
    t: Cluster
    s: Cluster
    r: Cluster
    sons: List["ProductNode"] = field(default_factory=list)


def product_tree(tij_root: Block, tjk_root: Block) -> ProductNode:
    """
    (t, s, r) has sons sons(t) x sons(s) x sons(r) unless (t, s) or (s, r) is a leaf.
    """
    if tij_root.col.key != tjk_root.row.key:
        raise ContractError("Block trees do not share their middle cluster tree")

    def _build(ts: Block, sr: Block) -> ProductNode:
        node = ProductNode(ts.row, ts.col, sr.col)
        if ts.is_leaf() or sr.is_leaf():
            return node
        for i in range(len(ts.row.sons)):
            for k in range(len(ts.col.sons)):
                for j in range(len(sr.col.sons)):
                    node.sons.append(_build(ts.sons[i][k], sr.sons[k][j]))
        return node

    return _build(tij_root, tjk_root)


def iter_products(root: ProductNode) -> Iterator[ProductNode]:
    stack = [root]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(node.sons))


def count_products(root: ProductNode) -> int:
    return sum(1 for _ in iter_products(root))
