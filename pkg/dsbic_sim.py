#!/usr/bin/env python
"""Dither-beat cancellation simulator CLI."""

import argparse
import dataclasses
import logging
import sys

from src.experiment import (
    PSD_STAGES,
    dump_psd,
    load_scenario,
    load_sweep,
    run_scenario,
    run_sweep,
)
from src.utils.config import Config

logger = logging.getLogger(__name__)


def _format_ber(ber):
    return "-" if ber is None else f"{ber:.3e}"


def cmd_run(args):
    """Run one scenario."""
    scenario = load_scenario(args.scenario, args.set)
    if args.seed is not None:
        scenario = dataclasses.replace(scenario, seed=args.seed)

    result = run_scenario(
        scenario,
        out_dir=args.out_dir,
        workers=args.workers,
        save_current=args.save_current,
    )

    print(f"\nScenario {result.scenario_hash}  (CSPR {result.measured_cspr_db:.2f} dB)")
    print(f"{'Receiver':<10} {'BER':<12} {'Errors':<10} {'Bits':<10} {'HD-FEC':<8} {'EVM (dB)':<10}")
    print("-" * 64)
    for row in result.rows():
        passes = "pass" if row.passes_hdfec else "fail"
        print(
            f"{row.receiver:<10} {row.ber:<12.3e} {row.bit_errors:<10} "
            f"{row.bits_total:<10} {passes:<8} {row.evm_db:<10.2f}"
        )

    if result.iteration_ber:
        print(f"\n{'Iteration':<10} {'BER':<12} {'Objective':<12}")
        print("-" * 36)
        for record in result.iteration_ber:
            print(
                f"{record['iteration']:<10} {_format_ber(record['ber']):<12} "
                f"{record['objective']:<12.4g}"
            )
    print(f"\nOutput: {Config.get_scenario_dir(result.scenario_hash, args.out_dir)}")


def cmd_sweep(args):
    """Run a sweep."""
    spec = load_sweep(args.sweep, args.set)
    if args.seed is not None:
        spec = dataclasses.replace(spec, base=dataclasses.replace(spec.base, seed=args.seed))

    result = run_sweep(
        spec,
        out_dir=args.out_dir,
        workers=args.workers or 1,
        continue_on_error=args.continue_on_error,
    )

    print(f"\nSweep {result.sweep_hash}  axis: {spec.axis}")
    print(f"{'Value':<12} {'KK BER':<12} {'DSBIC BER':<12}")
    print("-" * 36)
    for point in result.points:
        if 'error' in point:
            print(f"{point['value']:<12} error: {point['error']}")
            continue
        print(
            f"{point['value']:<12} {_format_ber(point.get('kk_ber')):<12} "
            f"{_format_ber(point.get('dsbic_ber')):<12}"
        )

    print(f"\nHD-FEC ({Config.HDFEC_THRESHOLD:g}) crossings:")
    for receiver, crossing in result.crossings.items():
        shown = "none" if crossing is None else f"{crossing:.4g}"
        print(f"  {receiver:<8} {shown}")
    print(f"\nOutput: {Config.get_scenario_dir(result.sweep_hash, args.out_dir)}")
    return 1 if result.failures else 0


def cmd_psd(args):
    """Dump a PSD at one pipeline stage."""
    scenario = load_scenario(args.scenario, args.set)
    if args.seed is not None:
        scenario = dataclasses.replace(scenario, seed=args.seed)

    estimate = dump_psd(scenario, args.stage, out_dir=args.out_dir, nfft=args.nfft)
    print(f"\nPSD at {args.stage}: {estimate.frequencies.size} bins, "
          f"peak at {estimate.peak_frequency() / 1e6:.2f} MHz")


def main(argv=None):
    """Main CLI entry point."""
    parser = argparse.ArgumentParser(description='Dither-Beat Cancellation Simulator')
    parser.add_argument('--out-dir', default=Config.OUTPUT_DIR,
                        help=f'Output directory (default: {Config.OUTPUT_DIR})')
    parser.add_argument('--seed', type=int, help='Override the scenario seed')
    parser.add_argument('--workers', type=int,
                        help='Sweep processes, or grid-search threads for run')
    parser.add_argument('--set', action='append', default=[], metavar='KEY=VALUE',
                        help='Override a scenario field by dotted path (repeatable)')
    parser.add_argument('--verbose', action='store_true', help='Debug logging')
    subparsers = parser.add_subparsers(dest='command', help='Command to execute')

    # run command
    run_parser = subparsers.add_parser('run', help='Run one scenario')
    run_parser.add_argument('scenario', help='Scenario JSON file')
    run_parser.add_argument('--save-current', action='store_true',
                            help='Store frame 0 and its photocurrent')
    run_parser.set_defaults(func=cmd_run)

    # sweep command
    sweep_parser = subparsers.add_parser('sweep', help='Sweep one axis')
    sweep_parser.add_argument('sweep', help='Sweep JSON file')
    sweep_parser.add_argument('--continue-on-error', action='store_true',
                              help='Record failing points and keep going')
    sweep_parser.set_defaults(func=cmd_sweep)

    # psd command
    psd_parser = subparsers.add_parser('psd', help='Dump a PSD CSV')
    psd_parser.add_argument('scenario', help='Scenario JSON file')
    psd_parser.add_argument('--stage', choices=PSD_STAGES, default='rx_current',
                            help='Pipeline stage (default: rx_current)')
    psd_parser.add_argument('--nfft', type=int, default=Config.PSD_NFFT,
                            help=f'Welch segment length (default: {Config.PSD_NFFT})')
    psd_parser.set_defaults(func=cmd_psd)

    args = parser.parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )

    if not args.command:
        parser.print_help()
        return 1

    try:
        Config.ensure_directories(args.out_dir)
        return args.func(args) or 0
    except Exception as e:
        print(f"Error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
