#!/usr/bin/env python3
"""
Command-line entry point for frs-gaps experiments.

Runs single experiments, grid campaigns and the close-fraction trend over
folded Reed-Solomon codes, writing JSON-lines reports (or trend CSV) to
stdout or --out.

Usage:
    frs_cli.py line-gap --preset tiny --trials 200
    frs_cli.py design-check --q 17 --gamma 3 --m 3 --n 5 --k 5
    frs_cli.py encode --preset tiny --message 1,2
    frs_cli.py decode --preset tiny --word 1,2,3,4,5,6,7,8 --delta 1/4
    frs_cli.py sweep --preset tiny --kind line-gap --grid delta=0,1/4
    frs_cli.py trend --preset small --qs 8191,16381,32749

Exit codes:
    0 - every verdict passed
    1 - a VIOLATION was recorded (or an unexpected error occurred)
    2 - usage or configuration error

Signals:
    SIGTERM/SIGINT - a running sweep stops after the current configuration
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any

# Add the project directory to the path
sys.path.insert(0, str(Path(__file__).parent))

from frs_gaps.config import load_config, parse_rational, resolve_settings
from frs_gaps.decoder import get_finder
from frs_gaps.errors import FRSError, InvariantViolation
from frs_gaps.frs import Word, encode_message, message_of
from frs_gaps.harness import KINDS, ExperimentConfig, run_experiment
from frs_gaps.reports import to_jsonable, write_report, write_trend_csv
from frs_gaps.sweep import grid_points, run_sweep, run_trend

# Set up logging
logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
    handlers=[
        logging.StreamHandler(sys.stderr),
    ],
)
logger = logging.getLogger("frs_cli")

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2

SETTING_FLAGS = (
    "q", "gamma", "m", "n", "k", "delta", "r", "t1", "t2", "eps", "a", "trials",
    "seed", "mode", "preset", "corruption", "choice", "ell", "s", "alpha_samples",
    "planted", "retries",
)


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from e


def _grid_entry(text: str) -> tuple[str, list[str]]:
    key, sep, values = text.partition("=")
    if not sep or not key:
        raise argparse.ArgumentTypeError(f"expected KEY=v1,v2,..., got {text!r}")
    return key.strip(), [v.strip() for v in values.split(",") if v.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=str, default=None, help="Path to YAML configuration file")
    common.add_argument("--preset", choices=("tiny", "small"), help="Parameter preset")
    for name in ("q", "gamma", "m", "n", "k", "r", "t1", "t2", "a", "trials", "ell", "s", "retries"):
        common.add_argument(f"--{name}", type=int)
    common.add_argument("--delta", type=str, help='Proximity radius δ\' as a rational, e.g. "1/4"')
    common.add_argument("--eps", type=str, help="Pinning slack ε as a rational")
    common.add_argument("--seed", type=str, help="Root seed (default $FRS_SEED or 0)")
    common.add_argument("--mode", choices=("oracle", "decoder", "auto"))
    common.add_argument("--corruption", choices=("joint-block", "per-alpha", "none"))
    common.add_argument("--choice", choices=("nearest", "farthest"))
    common.add_argument("--alpha-samples", dest="alpha_samples", type=int)
    planted = common.add_mutually_exclusive_group()
    planted.add_argument("--planted", dest="planted", action="store_const", const=True)
    planted.add_argument("--random", dest="planted", action="store_const", const=False)
    common.add_argument("--out", type=str, default=None, help="Output file (default stdout)")
    common.add_argument("--timing", action="store_true", help="Include wall-clock time in reports")
    common.add_argument("--verbose", action="store_true", help="Debug logging")

    parser = argparse.ArgumentParser(description="Folded Reed-Solomon proximity-gap experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    encode = sub.add_parser("encode", parents=[common], help="Encode a message")
    encode.add_argument("--message", type=_int_list, required=True, help="Coefficients, low degree first")

    decode = sub.add_parser("decode", parents=[common], help="List-decode a received word")
    decode.add_argument("--word", type=_int_list, required=True, help="Flat word, block by block")

    for kind in KINDS:
        sub.add_parser(kind, parents=[common], help=f"Run the {kind} experiment")

    sweep = sub.add_parser("sweep", parents=[common], help="Run an experiment over a parameter grid")
    sweep.add_argument("--kind", choices=KINDS, default="line-gap")
    sweep.add_argument("--grid", type=_grid_entry, action="append", default=[], metavar="KEY=v1,v2")

    trend = sub.add_parser("trend", parents=[common], help="Close-fraction versus q, with fitted exponent")
    trend.add_argument("--qs", type=_int_list, required=True, help="Comma-separated primes")
    trend.add_argument("--grid", type=_grid_entry, action="append", default=[], metavar="delta=v1,v2")
    return parser


def _flags(args: argparse.Namespace) -> dict[str, Any]:
    return {name: getattr(args, name, None) for name in SETTING_FLAGS}


def _settings(args: argparse.Namespace) -> dict[str, Any]:
    return resolve_settings(None, load_config(args.config), _flags(args))


def _explicit_keys(args: argparse.Namespace) -> set[str]:
    """Settings named by the config file or a flag, as opposed to defaulted or derived."""
    flags = {name for name, value in _flags(args).items() if value is not None}
    return flags | set(load_config(args.config))


def _emit_json(obj: Any, out: str | None) -> bool:
    text = json.dumps(to_jsonable(obj), sort_keys=True) + "\n"
    if out is None:
        sys.stdout.write(text)
        return True
    try:
        with open(out, "w") as f:
            f.write(text)
    except OSError as e:
        logger.error(f"Failed to write output file: {e}")
        return False
    return True


def cmd_encode(args: argparse.Namespace) -> int:
    config = ExperimentConfig.from_settings(_settings(args), "decoder-check")
    word = encode_message(config.params, args.message)
    ok = _emit_json({"message": args.message, "word": word}, args.out)
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_decode(args: argparse.Namespace) -> int:
    config = ExperimentConfig.from_settings(_settings(args), "decoder-check")
    p = config.params
    y = Word.from_flat(args.word, p.m)
    finder = get_finder(p, config.mode, s=config.s)
    entries = finder.near(y, config.delta)
    result = {
        "radius": config.delta,
        "backend": finder.name,
        "distance": finder.distance(y),
        "is_codeword": message_of(p, y) is not None,
        "list": [{"message": f.padded(p.k), "word": c} for f, c in entries],
    }
    logger.info(f"Found {len(entries)} codeword(s) within {config.delta}")
    ok = _emit_json(result, args.out)
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_experiment(args: argparse.Namespace) -> int:
    config = ExperimentConfig.from_settings(_settings(args), args.command)
    report = run_experiment(config)
    write_report(report, args.out, include_timing=args.timing)
    if report.violations:
        logger.warning(f"{report.violations} VIOLATION verdict(s) recorded")
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    points = grid_points(_settings(args), _explicit_keys(args), dict(args.grid))
    logger.info(f"Sweeping {len(points)} configuration(s) of {args.kind}")
    violations = errors = 0
    for i, report in enumerate(run_sweep(args.kind, points)):
        if not write_report(report, args.out, include_timing=args.timing, append=i > 0):
            return EXIT_VIOLATION
        violations += report.violations
        errors += "error" in report.aggregate
    if violations:
        return EXIT_VIOLATION
    if errors:
        return EXIT_USAGE
    return EXIT_OK


def cmd_trend(args: argparse.Namespace) -> int:
    settings = _settings(args)
    grid = dict(args.grid)
    unknown = set(grid) - {"delta"}
    if unknown:
        logger.error(f"trend only sweeps delta, got {', '.join(sorted(unknown))}")
        return EXIT_USAGE
    deltas = [parse_rational(v, "delta") for v in grid.get("delta", [])]
    result = run_trend(settings, args.qs, deltas)
    write_trend_csv(result.rows, args.out if args.out is not None else sys.stdout)
    for delta, exponent in result.exponents.items():
        logger.info(f"δ'={delta}: fitted exponent {exponent}")
    if any(row["violations"] for row in result.rows):
        return EXIT_VIOLATION
    return EXIT_OK


COMMANDS = {
    "encode": cmd_encode,
    "decode": cmd_decode,
    "sweep": cmd_sweep,
    "trend": cmd_trend,
    **{kind: cmd_experiment for kind in KINDS},
}


def main(argv: list[str] | None = None) -> int:
    """Main entry point.

    Returns:
        Exit code (0 pass, 1 violation, 2 usage or configuration error).
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)

    try:
        return COMMANDS[args.command](args)
    except InvariantViolation as e:
        logger.error(f"VIOLATION: {e}")
        return EXIT_VIOLATION
    except FRSError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_USAGE
    except KeyboardInterrupt:
        logger.info("Interrupted by user")
        return EXIT_USAGE
    except Exception as e:
        logger.exception(f"Unexpected error: {e}")
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
