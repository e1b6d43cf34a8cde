from .rkmatrix import RkMatrix, TruncationControl, EXACT
from .truncation import svd_trunc, dense_to_rk, rkadd, rowmerge, rkmerge, rk_restrict
from .truncation import thin_qr, thin_svd
