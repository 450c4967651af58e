"""Command-line entry point: ``idpsim sweep`` and ``idpsim verify``."""

from __future__ import annotations

import argparse
import sys

from .errors import DomainError
from .sweep import RunConfig, csv_text, emit_csv, run_sweep


def _common_flags(suppress: bool = False) -> argparse.ArgumentParser:
    # Subcommand copies suppress their defaults so flags given before the
    # subcommand are not overwritten.
    p = argparse.ArgumentParser(add_help=False,
                                argument_default=argparse.SUPPRESS if suppress else None)
    p.add_argument("--alpha-start", type=float, help="first angle, degrees")
    p.add_argument("--alpha-stop", type=float, help="last angle, degrees")
    p.add_argument("--alpha-step", type=float, help="angle step, degrees")
    p.add_argument("--model", choices=("ideal", "calibrated"))
    p.add_argument("--calibration", metavar="PATH",
                   help="PBS calibration file (default: the shipped measured_pbs.cal)")
    p.add_argument("--photons", metavar="MU", type=float, help="mean photons per pulse")
    p.add_argument("--pulses", metavar="N", type=int,
                   help="pulses per state for Monte Carlo counts (0 disables)")
    p.add_argument("--seed", metavar="S", type=int)
    p.add_argument("--out", metavar="PATH", help="CSV output (default: stdout)")
    if not suppress:
        p.set_defaults(alpha_start=0.0, alpha_stop=45.0, alpha_step=4.0, model="ideal",
                       calibration=None, photons=0.2, pulses=0, seed=0, out=None)
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="idpsim", description=__doc__, parents=[_common_flags()])
    common = _common_flags(suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("sweep", parents=[common], help="sweep alpha and write a CSV table")
    sub.add_parser("verify", parents=[common], help="run the acceptance checks")
    return parser


def config_from_args(args) -> RunConfig:
    return RunConfig(
        alpha_start=args.alpha_start,
        alpha_stop=args.alpha_stop,
        alpha_step=args.alpha_step,
        model_tag=args.model,
        calibration_path=args.calibration,
        mean_photons=args.photons,
        n_pulses=args.pulses,
        seed=args.seed,
        output_path=args.out,
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
    except DomainError as exc:
        print(f"idpsim: {exc}", file=sys.stderr)
        return 2

    if args.command == "verify":
        from .verify import run_all

        results = run_all()
        failed = [r for r in results if not r.passed]
        print(f"{len(results) - len(failed)}/{len(results)} checks passed")
        return 1 if failed else 0

    try:
        rows, summary = run_sweep(config)
    except (OSError, DomainError) as exc:
        print(f"idpsim: {exc}", file=sys.stderr)
        return 2
    if config.output_path:
        emit_csv(rows, summary, config.output_path, config.monte_carlo)
    else:
        sys.stdout.write(csv_text(rows, summary, config.monte_carlo))
    if summary["alignment_failures"]:
        print(f"idpsim: {summary['alignment_failures']} rows failed to align", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
