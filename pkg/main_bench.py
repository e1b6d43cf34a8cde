#
from typing import List

#
from engine import Benchmark, BenchRecord, emit
from utils import logger


def main_bench(opts) -> List[BenchRecord]:

    ### Benchmark ###
    # Create a Benchmark instance from the flattened options and run every level
    benchmark = Benchmark(opts)
    records = benchmark.run()

    ### Export ###
    fmt = getattr(opts, "output.format", "csv")
    path = getattr(opts, "output.path", None)
    emit(records, fmt, path)
    logger.info(f"Finished {len(records)} benchmark runs")
    return records


#
if __name__ == "__main__":
    pass
