#
import sys
from argparse import ArgumentParser

#
from main_bench import main_bench
from utils import logger, load_config_file, override_from_args
from utils.errors import ConfigError, NumericalError

# command-line attribute -> dotted config key
ARG_TO_CONFIG = {
    "experiment": "bench.experiment",
    "problem": "bench.problem",
    "variant": "bench.variant",
    "levels": "bench.levels",
    "seed": "bench.seed",
    "power_iterations": "bench.power_iterations",
    "tol": "truncation.rel_tol",
    "max_rank": "truncation.max_rank",
    "eta": "hmatrix.eta",
    "leaf_size": "hmatrix.leaf_size",
    "format": "output.format",
    "out": "output.path",
}

# every dotted key a config file may set
CONFIG_KEYS = tuple(ARG_TO_CONFIG.values()) + ("problem.length_scale", "problem.jitter")


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(description="hmatrix-arithmetic")
    subparsers = parser.add_subparsers(dest="command")
    subparsers.required = True

    bench = subparsers.add_parser("bench", help="Run an arithmetic benchmark on a model problem")
    bench.add_argument(
        "--config",
        "-cf",
        default=None,
        help="The configuration file; command-line flags override its values",
    )
    bench.add_argument("--experiment", choices=["mul", "inv", "chol", "lr"], default=None)
    bench.add_argument("--problem", choices=["slp", "dlp", "gaussian"], default=None)
    bench.add_argument("--variant", choices=["standard", "accumulated", "both"], default=None)
    bench.add_argument("--levels", default=None, help="Comma separated sphere refinement levels, e.g. 1,2,3")
    bench.add_argument("--tol", type=float, default=None, help="Relative truncation tolerance")
    bench.add_argument("--max-rank", type=int, default=None, help="Rank cap, unbounded if not given")
    bench.add_argument("--eta", type=float, default=None, help="Admissibility parameter")
    bench.add_argument("--leaf-size", type=int, default=None)
    bench.add_argument("--seed", type=int, default=None)
    bench.add_argument("--format", choices=["csv", "json"], default=None)
    bench.add_argument("--out", default=None, help="Output file, standard output if not given")
    bench.add_argument("--power-iterations", type=int, default=None)
    return parser


def main(argv=None) -> int:
    """
    Benchmark example:
    > python3 main.py bench --experiment=mul --problem=slp --levels=1,2,3 --tol=1e-4
    > python3 main.py bench --config=configs/chol_gaussian.yaml --format=json --out=chol.json
    """

    # 1. Use argument parser to deal with terminal inputs
    parser = build_parser()
    args = parser.parse_args(argv)

    # 2. Parse the config file into opts, then apply command-line overrides
    try:
        opts = load_config_file(args, CONFIG_KEYS)
    except ConfigError as ex:
        parser.error(str(ex))
    if args.config is not None:
        logger.info(f"Configurations loaded from {args.config}")
    opts = override_from_args(opts, ARG_TO_CONFIG)

    # 3. Start benchmarking
    try:
        main_bench(opts)
    except ConfigError as ex:
        parser.error(str(ex))
    except NumericalError as ex:
        logger.error(f"Numerical failure: {ex}")
        return 1
    return 0


#
if __name__ == "__main__":
    sys.exit(main())
