"""Command-line driver.

Subcommands
-----------
sweep        evaluate the diagnostic grid and write tables / curve files
oracle       run the cross-check suite; exit status 2 on any failure
thresholds   print c_cand, s_geom and s_dep for each configured energy
show-config  print the parsed configuration with defaults filled in

Exit codes: 0 success, 1 configuration error, 2 oracle failure,
3 numerical error.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys

from . import __version__
from .checks import run_oracle_suite
from .config import OutputSpec, RunConfig, load_config
from .errors import NoBottleneckError, SaddleSqueezeError, ValidationError
from .qnf_symbol import candidate_width, depletion_threshold, geometric_threshold
from .sweep import format_float, run_sweep, write_outputs

logger = logging.getLogger("saddle_squeeze")

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_ORACLE = 2
EXIT_NUMERIC = 3


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="YAML run configuration (defaults if omitted)")
    common.add_argument("--tol", type=float, help="T_quad truncation tolerance, overrides the config")
    common.add_argument("--seed", type=int, help="oracle RNG seed, overrides the config")
    common.add_argument("--threads", type=int, help="worker threads (default: $SADDLE_SQUEEZE_THREADS, 0 = auto)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="saddle-squeeze",
        description="Squeezed-state transmission diagnostics for quantum normal-form saddles.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", parents=[common], help="run the (E, s) sweep")
    sweep.add_argument("--out", metavar="DIR", default=".", help="directory for output files")
    sweep.add_argument(
        "--format", choices=("csv", "structured"), help="format of the table output (csv or JSON records)"
    )
    sweep.add_argument("--log-prob", action="store_true", help="append log_t_quad and log_t_qnf columns")

    sub.add_parser("oracle", parents=[common], help="run the oracle cross-check suite")
    sub.add_parser("thresholds", parents=[common], help="print c_cand, s_geom and s_dep per energy")
    sub.add_parser("show-config", parents=[common], help="echo the parsed configuration")
    return parser


def _table_outputs(config: RunConfig, fmt: str | None) -> tuple[OutputSpec, ...]:
    if fmt is None:
        return config.outputs
    suffix = {"csv": ".csv", "structured": ".json"}[fmt]
    out = []
    for spec in config.outputs:
        if spec.diagnostic == "table":
            stem = spec.path.rsplit(".", 1)[0] if "." in spec.path else spec.path
            spec = OutputSpec("table", fmt, stem + suffix)
        out.append(spec)
    return tuple(out)


def _cmd_sweep(config: RunConfig, args) -> int:
    records = run_sweep(config, threads=args.threads)
    paths = write_outputs(records, _table_outputs(config, args.format), args.out, args.log_prob)
    flagged = sum(1 for r in records if r.status != "ok")
    for path in paths:
        print(path)
    logger.info("%d grid points, %d flagged", len(records), flagged)
    return EXIT_OK


def _cmd_oracle(config: RunConfig, args) -> int:
    report = run_oracle_suite(config)
    sys.stdout.write(report.to_json())
    for check in report.checks:
        logger.info("%s %s (%.3g <= %.3g)", "PASS" if check.passed else "FAIL", check.name,
                    check.discrepancy, check.tolerance)
    return EXIT_OK if report.passed else EXIT_ORACLE


def _cmd_thresholds(config: RunConfig, args) -> int:
    model = config.model
    print("E,c_cand,s_geom,s_geom_status,s_dep,s_dep_status")
    for E in sorted(set(config.e_values)):
        try:
            c = candidate_width(model, E)
            geom = geometric_threshold(model, E)
            geom_val, geom_status = geom.value, geom.outcome.value
        except NoBottleneckError:
            c, geom_val, geom_status = math.nan, math.nan, "no_bottleneck"
        dep = depletion_threshold(model, E)
        print(",".join([format_float(E), format_float(c), format_float(geom_val), geom_status,
                        format_float(dep.value), dep.outcome.value]))
    return EXIT_OK


def _cmd_show_config(config: RunConfig, args) -> int:
    sys.stdout.write(config.dumps())
    return EXIT_OK


_COMMANDS = {
    "sweep": _cmd_sweep,
    "oracle": _cmd_oracle,
    "thresholds": _cmd_thresholds,
    "show-config": _cmd_show_config,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        config = load_config(args.config).with_overrides(tol=args.tol, seed=args.seed)
    except ValidationError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return _COMMANDS[args.command](config, args)
    except ValidationError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SaddleSqueezeError, ArithmeticError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
