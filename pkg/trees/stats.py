from collections import Counter
from dataclasses import dataclass

from trees.block_tree import Block, BlockKind, iter_blocks
from trees.cluster_tree import iter_clusters


@dataclass
class TreeStats:
    depth: int
    sparsity_row: int
    sparsity_col: int
    admissible_leaves: int
    inadmissible_leaves: int
    max_sons: int
    cluster_depth: int

    @property
    def leaf_counts(self):
        return {"admissible": self.admissible_leaves, "inadmissible": self.inadmissible_leaves}


def tree_stats(root: Block) -> TreeStats:
    """
    Sparsity constants, depth and leaf counts of a block tree, by full traversal.
    Sparsity counts every block (leaf or not) sharing a row (column) cluster.
    """

    rows, cols = Counter(), Counter()
    depth = 0
    admissible, inadmissible = 0, 0
    for block in iter_blocks(root):
        rows[block.row.key] += 1
        cols[block.col.key] += 1
        depth = max(depth, block.level)
        if block.kind is BlockKind.ADMISSIBLE:
            admissible += 1
        elif block.kind is BlockKind.INADMISSIBLE:
            inadmissible += 1

    max_sons, cluster_depth = 0, 0
    for tree_root in (root.row, root.col):
        for cluster in iter_clusters(tree_root):
            max_sons = max(max_sons, len(cluster.sons))
            cluster_depth = max(cluster_depth, cluster.level)

    return TreeStats(
        depth=depth,
        sparsity_row=max(rows.values()),
        sparsity_col=max(cols.values()),
        admissible_leaves=admissible,
        inadmissible_leaves=inadmissible,
        max_sons=max_sons,
        cluster_depth=cluster_depth,
    )
