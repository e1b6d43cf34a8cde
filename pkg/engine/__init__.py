from .engine_bench import Benchmark, CompressedProblem, parse_levels, VARIANT_CHOICES
from .experiments import EXPERIMENTS, ExperimentContext, ExperimentResult
from .export import BenchRecord, CSV_HEADER, emit
