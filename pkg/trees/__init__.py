from .cluster_tree import IndexSet, Cluster, build_cluster_tree, iter_clusters
from .block_tree import Block, BlockKind, build_block_tree, block_transpose, is_admissible
from .block_tree import iter_blocks, iter_leaves
from .stats import TreeStats, tree_stats
