"""
Operation counters for the benchmark harness.

Counters travel with TruncationControl, so two runs with different controls
never share state.
"""

import threading
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Tuple


COUNTER_NAMES = (
    "qr_calls",
    "svd_calls",
    "rkadd_calls",
    "rkmerge_calls",
    "rkupdate_leaf_updates",
    "addproduct_calls",
    "flush_calls",
)


@dataclass
class OpCounters:
    qr_calls: int = 0
    svd_calls: int = 0
    rkadd_calls: int = 0
    rkmerge_calls: int = 0
    rkupdate_leaf_updates: int = 0
    addproduct_calls: int = 0
    flush_calls: int = 0
    # updates received by each leaf, keyed by (row offset, row size, col offset, col size)
    leaf_updates: Counter = field(default_factory=Counter)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def incr(self, name: str, amount: int = 1) -> None:
        with self._lock:
            setattr(self, name, getattr(self, name) + amount)

    def tally_leaf(self, key: Tuple[int, int, int, int]) -> None:
        with self._lock:
            self.rkupdate_leaf_updates += 1
            self.leaf_updates[key] += 1

    def reset(self) -> None:
        with self._lock:
            for name in COUNTER_NAMES:
                setattr(self, name, 0)
            self.leaf_updates = Counter()

    def merge(self, other: "OpCounters") -> "OpCounters":
        """
        Add the counts of other into self and return self
        """
        with self._lock:
            for name in COUNTER_NAMES:
                setattr(self, name, getattr(self, name) + getattr(other, name))
            self.leaf_updates.update(other.leaf_updates)
        return self

    @property
    def truncations(self) -> int:
        # truncating additions and merges plus leaf updates, the comparison metric of the two variants
        return self.rkadd_calls + self.rkmerge_calls + self.rkupdate_leaf_updates

    def as_dict(self) -> Dict[str, int]:
        return {name: getattr(self, name) for name in COUNTER_NAMES}


