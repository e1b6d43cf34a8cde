"""
Factorized low-rank matrices R = A B^* and the truncation control.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from utils.counters import OpCounters
from utils.errors import DomainError


@dataclass(eq=False)
class RkMatrix:
    a: np.ndarray  # (rows, rank)
    b: np.ndarray  # (cols, rank)

    def __post_init__(self) -> None:
        assert self.a.ndim == 2 and self.b.ndim == 2, "factors must be 2-d"
        if self.a.shape[1] != self.b.shape[1]:
            raise DomainError(
                f"Factor ranks differ: a has {self.a.shape[1]}, b has {self.b.shape[1]} columns"
            )

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RkMatrix":
        return cls(np.zeros((rows, 0)), np.zeros((cols, 0)))

    @property
    def rank(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.a.shape[0], self.b.shape[0])

    def to_dense(self) -> np.ndarray:
        return self.a @ self.b.T

    def adjoint(self) -> "RkMatrix":
        # shares the factor arrays
        return RkMatrix(self.b, self.a)

    def copy(self) -> "RkMatrix":
        return RkMatrix(self.a.copy(), self.b.copy())

    def assign(self, other: "RkMatrix") -> None:
        """ Overwrite this matrix in place with the factors of other """
        if other.shape != self.shape:
            raise DomainError(f"Shape mismatch {other.shape} vs {self.shape}")
        self.a, self.b = other.a, other.b

    def storage(self) -> int:
        return self.a.size + self.b.size

    def __repr__(self) -> str:
        return f"RkMatrix(shape={self.shape}, rank={self.rank})"


@dataclass(frozen=True)
class TruncationControl:
    """
    Rank rule k = min(max_rank, #{i : sigma_i > rel_tol * sigma_1}).

    rel_tol = 0 with max_rank = None keeps every nonzero singular value.
    counters, when given, collects operation counts of every call that
    receives this control.
    """

    max_rank: Optional[int] = None
    rel_tol: float = 0.0
    counters: Optional[OpCounters] = None

    def __post_init__(self) -> None:
        if self.rel_tol < 0.0:
            raise DomainError(f"rel_tol must be nonnegative, got {self.rel_tol}")
        if self.max_rank is not None and self.max_rank < 0:
            raise DomainError(f"max_rank must be nonnegative, got {self.max_rank}")

    def choose_rank(self, sigma: np.ndarray) -> int:
        """
        Args:
            sigma: singular values in descending order
        """
        if sigma.size == 0 or sigma[0] <= 0.0:
            return 0
        k = int(np.count_nonzero(sigma > self.rel_tol * sigma[0]))
        if self.max_rank is not None:
            k = min(k, self.max_rank)
        return k

    def count(self, name: str, amount: int = 1) -> None:
        if self.counters is not None:
            self.counters.incr(name, amount)

    def tally_leaf(self, key) -> None:
        if self.counters is not None:
            self.counters.tally_leaf(key)

    def with_counters(self, counters: Optional[OpCounters]) -> "TruncationControl":
        return TruncationControl(self.max_rank, self.rel_tol, counters)


EXACT = TruncationControl()
