"""
benchmark: the paired planner comparison, written as JSON and CSV.
"""
import logging

from cli.common import add_config_arguments, ensure_parent, override, parse_list, resolve_config
from core.sim.benchmark import run_benchmark

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("benchmark", help="Run the paired planner benchmark")
    add_config_arguments(parser)
    parser.add_argument("--planners", help="Comma-separated planners, e.g. greedy,mcts")
    parser.add_argument("--obstacles", help="Comma-separated obstacle counts, e.g. 1,2,3")
    parser.add_argument("--maps", type=int, help="Maps per obstacle count")
    parser.add_argument("--base-seed", type=int, help="Seed of the first map")
    parser.add_argument("--workers", type=int, help="Worker processes")
    parser.add_argument("--out", default="benchmark.json", help="Report JSON path")
    parser.add_argument("--csv", help="Report CSV path (default: next to --out)")
    parser.add_argument("--with-steps", action="store_true", help="Include per-step logs in the JSON")
    parser.set_defaults(func=run)


def run(args) -> int:
    config = resolve_config(
        args,
        override("benchmark", "planners", parse_list(args.planners)),
        override("benchmark", "obstacle_counts", parse_list(args.obstacles, int)),
        override("benchmark", "n_maps", args.maps),
        override("benchmark", "base_seed", args.base_seed),
        override("benchmark", "workers", args.workers),
    )
    report = run_benchmark(config=config)

    ensure_parent(args.out)
    report.write_json(args.out, include_steps=args.with_steps)
    csv_path = args.csv or (args.out[:-5] if args.out.endswith(".json") else args.out) + ".csv"
    ensure_parent(csv_path)
    report.write_csv(csv_path)

    print(report.summary_table())
    return 0
