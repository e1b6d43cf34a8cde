from .hmatrix import HMatrix, h_zero, h_identity, h_from_dense, h_to_dense
from .hmatrix import h_transpose, h_assign, h_clear, StorageStats, storage_stats
from .eval import addeval, addevaltrans, matvec, rmatvec
from .update import rkupdate
