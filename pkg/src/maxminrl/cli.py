"""Command-line entry point: run / sweep / aggregate.

Exits 0 on success; on failure prints one machine-readable JSON error
line to stderr and exits nonzero.
"""

from __future__ import annotations

import argparse
import json
import sys
import traceback

from .config import load_config, set_key, valid_keys
from .runner import aggregate_runs, run_experiment, sweep_axis


def _add_overrides(parser):
    parser.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override a config key, e.g. --set agent.alpha_q=0.5")


def _apply_overrides(cfg, pairs):
    for pair in pairs:
        if "=" not in pair:
            raise ValueError(f"--set expects KEY=VALUE, got {pair!r}")
        key, value = pair.split("=", 1)
        set_key(cfg, key.strip(), value.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="maxminrl",
                                     description="entropy-regularized actor-critic runner")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute one seeded training run")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--seed", type=int, required=True)
    p_run.add_argument("--out", required=True)
    _add_overrides(p_run)

    p_sweep = sub.add_parser("sweep", help="cartesian runs over one config axis")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--axis", required=True,
                         help="dotted config key, e.g. agent.alpha_q")
    p_sweep.add_argument("--values", required=True,
                         help="comma-separated values for the axis")
    p_sweep.add_argument("--seeds", type=int, required=True,
                         help="number of seeds (0..n-1)")
    p_sweep.add_argument("--out", required=True)
    p_sweep.add_argument("--workers", type=int, default=1)
    _add_overrides(p_sweep)

    p_agg = sub.add_parser("aggregate", help="mean/std per step across runs")
    p_agg.add_argument("--in", dest="in_dir", required=True)
    p_agg.add_argument("--out", required=True)
    p_agg.add_argument("--metric", default="visits.csv",
                       help="per-run CSV file name to aggregate")
    p_agg.add_argument("--column", default="unique_cells")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            cfg = load_config(args.config)
            _apply_overrides(cfg, args.set)
            result = run_experiment(cfg, args.seed, args.out)
            print(f"run complete: {result.out_dir} "
                  f"unique_cells={result.final_unique_cells} "
                  f"max_eval_return={result.max_eval_return}")
        elif args.command == "sweep":
            cfg = load_config(args.config)
            _apply_overrides(cfg, args.set)
            values = [v.strip() for v in args.values.split(",") if v.strip()]
            sweep_axis(cfg, args.axis, values, list(range(args.seeds)),
                       args.out, workers=args.workers)
            print(f"sweep complete: {args.out}")
        elif args.command == "aggregate":
            aggregate_runs(args.in_dir, args.out, args.metric, args.column)
            print(f"aggregate written: {args.out}")
        return 0
    except Exception as exc:
        # context trace first, then one machine-readable line, nonzero exit
        traceback.print_exc(file=sys.stderr)
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
              file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
