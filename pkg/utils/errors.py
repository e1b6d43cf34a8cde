"""
Exception hierarchy shared by all packages.
"""


class HMatrixError(Exception):
    """ Root of every error raised by this library """


class DomainError(HMatrixError, ValueError):
    """ Invalid input: empty point set, shape mismatch, bad subrange, ragged grid """


class ContractError(HMatrixError):
    """ An algorithm was called outside of its precondition """


class ConfigError(HMatrixError, ValueError):
    """ Invalid benchmark configuration """


class NumericalError(HMatrixError, ArithmeticError):
    """
    Breakdown of a dense kernel at a leaf.

    Args:
        msg (str): description of the failure
        cluster: cluster (or anything with offset/size/level) where it happened
    """

    def __init__(self, msg: str, cluster=None) -> None:
        self.cluster = cluster
        if cluster is not None:
            msg = "{} at cluster offset={} size={} level={}".format(
                msg, cluster.offset, cluster.size, cluster.level
            )
        super(NumericalError, self).__init__(msg)
