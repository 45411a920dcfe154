"""Command line experiment runner.

Usage: ``ndd <experiment> [--config FILE] [--paths N] [--seed S] [--out FILE]``.
Flags override config fields; the config file overrides built-in defaults.
Exit code 0 on success; on failure a single machine-readable line
``error: <kind>: <detail>`` is printed to stderr and the exit code is nonzero.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .errors import (
    BracketFailureError,
    CapacityExhaustedError,
    ConfigError,
    InfeasibleDiversificationError,
)
from .experiments import EXPERIMENTS, default_config, merge_config, run


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ndd",
        description="Run a non-linear discounting experiment and write its CSV report.",
    )
    parser.add_argument("experiment", choices=EXPERIMENTS)
    parser.add_argument("--config", help="JSON config file overriding built-in defaults")
    parser.add_argument("--paths", type=int, help="override the path count")
    parser.add_argument("--seed", type=int, help="override the master seed")
    parser.add_argument("--out", help="output CSV path (default <experiment>.csv)")
    parser.add_argument(
        "--print-config",
        action="store_true",
        help="print the resolved config as JSON and exit",
    )
    return parser


def resolve_config(args: argparse.Namespace) -> dict:
    config = default_config(args.experiment)
    if args.config:
        try:
            with open(args.config) as handle:
                override = json.load(handle)
        except OSError as exc:
            raise ConfigError("config", f"cannot read {args.config}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError("config", f"invalid JSON in {args.config}: {exc}") from exc
        if not isinstance(override, dict):
            raise ConfigError("config", "top-level config must be a JSON object")
        config = merge_config(config, override)
    if args.paths is not None:
        config["paths"] = args.paths
    if args.seed is not None:
        config["seed"] = args.seed
    return config


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = resolve_config(args)
        if args.print_config:
            print(json.dumps(config, indent=2, sort_keys=True))
            return 0
        report = run(args.experiment, config)
        out = args.out or f"{args.experiment}.csv"
        report.to_csv(out)
    except ConfigError as exc:
        print(f"error: config-error: {exc}", file=sys.stderr)
        return 2
    except CapacityExhaustedError as exc:
        print(f"error: capacity-exhausted: {exc}", file=sys.stderr)
        return 3
    except BracketFailureError as exc:
        print(f"error: bracket-failure: {exc}", file=sys.stderr)
        return 4
    except InfeasibleDiversificationError as exc:
        print(f"error: infeasible-diversification: {exc}", file=sys.stderr)
        return 5
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
