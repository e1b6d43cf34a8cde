from .accumulator import PendingProduct, Accumulator, acc_new, addproduct, acc_split, acc_flush
from .accumulator import product_to_rk, virtual_sons, collect_virtual_sons
from .product_tree import ProductNode, product_tree, iter_products, count_products
