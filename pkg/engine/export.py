#
import csv
import json
import sys
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence

#
from utils import logger
from utils.errors import ConfigError

CSV_HEADER = (
    "experiment", "problem", "n", "eta", "leaf_size", "rel_tol", "max_rank",
    "variant", "wall_s", "s_per_dof", "error_est",
    "qr", "svd", "rkadd", "rkmerge", "rkupdate_leaf", "addproduct", "flush",
    "seed",
)

# output column -> OpCounters field
COUNTER_COLUMNS = {
    "qr": "qr_calls",
    "svd": "svd_calls",
    "rkadd": "rkadd_calls",
    "rkmerge": "rkmerge_calls",
    "rkupdate_leaf": "rkupdate_leaf_updates",
    "addproduct": "addproduct_calls",
    "flush": "flush_calls",
}


@dataclass
class BenchRecord:
    experiment: str
    problem: str
    n: int
    eta: float
    leaf_size: int
    rel_tol: float
    max_rank: Optional[int]
    variant: str
    wall_s: float
    error_est: float
    counters: Dict[str, int]
    seed: int
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def s_per_dof(self) -> float:
        return self.wall_s / self.n

    def as_row(self) -> Dict[str, Any]:
        """ Flat mapping with exactly the CSV_HEADER keys """
        row = {
            "experiment": self.experiment,
            "problem": self.problem,
            "n": self.n,
            "eta": self.eta,
            "leaf_size": self.leaf_size,
            "rel_tol": self.rel_tol,
            "max_rank": self.max_rank,
            "variant": self.variant,
            "wall_s": self.wall_s,
            "s_per_dof": self.s_per_dof,
            "error_est": self.error_est,
            "seed": self.seed,
        }
        for column, name in COUNTER_COLUMNS.items():
            row[column] = int(self.counters.get(name, 0))
        return {key: row[key] for key in CSV_HEADER}


def _write(records: Sequence[BenchRecord], fmt: str, stream) -> None:
    rows = [record.as_row() for record in records]
    if fmt == "csv":
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in rows:
            writer.writerow(["" if row[key] is None else row[key] for key in CSV_HEADER])
    else:
        json.dump(rows, stream, indent=2)
        stream.write("\n")


def emit(records: Sequence[BenchRecord], fmt: str = "csv", path: Optional[str] = None) -> None:
    """
    Write records as CSV (header always present) or as a JSON array of flat
    objects. path None or "-" writes to standard output.
    """
    if fmt not in ("csv", "json"):
        raise ConfigError(f"Unknown output format {fmt!r}, expected csv or json")

    if path is None or path == "-":
        _write(records, fmt, sys.stdout)
        sys.stdout.flush()
        return

    try:
        with open(path, "w", newline="") as file:
            _write(records, fmt, file)
    except OSError as ex:
        raise ConfigError(f"Cannot write results to {path}: {ex}") from ex
    logger.info(f"Wrote {len(records)} records to {path}")
