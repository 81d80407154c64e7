"""Batch CLI: `simulate <scenario-id> --config <path> --out <dir> ...`.

Exit codes: 0 success, 2 configuration error, 3 numerical-convergence
failure.
"""

import argparse
import sys

from .hhg import NumericalResolutionError
from .scenarios import (ConfigError, NumericalError, SCENARIO_IDS,
                        ScenarioConfig, apply_overrides, load_config,
                        run_scenario, validate_config)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def build_parser():
    parser = argparse.ArgumentParser(
        prog="simulate",
        description="Run squeezed-vacuum / coherent HHG scenario datasets.")
    parser.add_argument("scenario", choices=SCENARIO_IDS + ("all",),
                        help="scenario id (or 'all')")
    parser.add_argument("--config", help="TOML config file")
    parser.add_argument("--out", help="output directory (default ./out)")
    parser.add_argument("--nodes", type=int,
                        help="quadrature node count override")
    parser.add_argument("--paper-literal-eq4", action="store_true",
                        default=None,
                        help="use the printed growing-exponent propagation "
                             "variant (comparison only)")
    parser.add_argument("--threads", type=int,
                        help="worker threads (results are identical for "
                             "any value)")
    parser.add_argument("--check", action="store_true",
                        help="validate the config and exit")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config) if args.config else ScenarioConfig()
        config = apply_overrides(
            config, out_dir=args.out, nodes=args.nodes,
            paper_literal_eq4=args.paper_literal_eq4, threads=args.threads)
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    findings = validate_config(config)
    for f in findings:
        stream = sys.stderr if f.severity == "error" else sys.stdout
        print(f"{f.severity}: {f.fieldname}: {f.message}", file=stream)
    if args.check:
        return EXIT_CONFIG if any(f.severity == "error" for f in findings) \
            else EXIT_OK

    ids = SCENARIO_IDS if args.scenario == "all" else (args.scenario,)
    try:
        for scenario_id in ids:
            bundle = run_scenario(scenario_id, config)
            names = ", ".join(p.name for p in bundle.csv_paths)
            print(f"{scenario_id}: wrote {names} -> {bundle.out_dir}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalError, NumericalResolutionError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
