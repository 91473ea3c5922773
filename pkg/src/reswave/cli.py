"""Command-line entry point.

    reswave run <config> [--output-dir DIR] [--paper-scale]
    reswave compare <config> [--output-dir DIR]
    reswave oracle dispersion --k K [--branch plus|minus] [--truncation N]
    reswave oracle harmonic --n N [--a0-re X --a0-im Y --mu MU --tau T --coefficient C]
    reswave oracle traveling-wave --c C --xi XI [--tol TOL]

Exit codes: 0 success, 1 configuration error, 2 solver divergence or step
failure.  Relative output directories resolve against $RESWAVE_OUTPUT_ROOT
when set.
"""

from __future__ import annotations

import argparse
import sys
import warnings

from .errors import ConfigError, SolverDivergedError, StepFailureError
from .experiments import export_run, load_config, run_experiment
from .oracles import TravelingWaveProfile, dispersion, single_harmonic
from .output import export_snapshots


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reswave",
        description="resonant sound-wave reflection experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run an experiment from a config file")
    run_p.add_argument("config", help="path to a key = value config file")
    run_p.add_argument("--output-dir", default=None, help="override output directory")
    run_p.add_argument("--paper-scale", action="store_true",
                       help="use the full-resolution grids (slow; prints a warning)")

    cmp_p = sub.add_parser("compare", help="run the solver comparison from a config")
    cmp_p.add_argument("config")
    cmp_p.add_argument("--output-dir", default=None)

    oracle_p = sub.add_parser("oracle", help="print reference solutions")
    osub = oracle_p.add_subparsers(dest="oracle", required=True)

    disp = osub.add_parser("dispersion")
    disp.add_argument("--k", type=int, required=True)
    disp.add_argument("--branch", choices=("plus", "minus"), default="plus")
    disp.add_argument("--truncation", type=int, default=100_000)

    harm = osub.add_parser("harmonic")
    harm.add_argument("--n", type=int, required=True)
    harm.add_argument("--a0-re", type=float, default=1.0)
    harm.add_argument("--a0-im", type=float, default=0.0)
    harm.add_argument("--mu", type=float, default=1.0)
    harm.add_argument("--tau", type=float, default=0.1)
    harm.add_argument("--coefficient", type=float, default=1.0)

    trav = osub.add_parser("traveling-wave")
    trav.add_argument("--c", type=float, required=True)
    trav.add_argument("--xi", type=float, required=True)
    trav.add_argument("--tol", type=float, default=1e-12)

    return parser


def _cmd_run(args, force_compare: bool = False) -> int:
    config = load_config(args.config)
    if force_compare and config.experiment != "compare":
        raise ConfigError(
            f"'reswave compare' requires experiment = compare, got "
            f"'{config.experiment}'")
    if args.output_dir is not None:
        config.output_dir = args.output_dir
    if getattr(args, "paper_scale", False):
        from .experiments import _PAPER_SCALE_N

        config.paper_scale = True
        if config.experiment in _PAPER_SCALE_N:
            config.values["n"] = _PAPER_SCALE_N[config.experiment]
            warnings.warn(
                f"paper-scale resolution n={config.values['n']}: expect a long run",
                stacklevel=1)
    try:
        output = run_experiment(config)
    except (SolverDivergedError, StepFailureError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        partial = getattr(exc, "partial", None)
        if partial is not None:
            from .experiments import resolve_output_dir

            directory = resolve_output_dir(config)
            export_snapshots(partial, directory)
            print(f"partial output flushed to {directory}", file=sys.stderr)
        return 2
    directory = export_run(config, output)
    print(directory)
    return 0


def _cmd_oracle(args) -> int:
    if args.oracle == "dispersion":
        res = dispersion(args.k, args.branch, args.truncation)
        print(f"k = {res.k}")
        print(f"omega0 = {res.omega0:.17g}")
        print(f"omega1 = {res.omega1:.17g}")
        print(f"omega2 = {res.omega2:.17g}")
    elif args.oracle == "harmonic":
        val = single_harmonic(args.n, complex(args.a0_re, args.a0_im), args.mu,
                              args.tau, args.coefficient)
        print(f"re_a = {val.real:.17g}")
        print(f"im_a = {val.imag:.17g}")
    else:
        prof = TravelingWaveProfile(args.c, newton_tol=args.tol)
        val = prof.amplitude(args.xi)
        phi = prof.phi(args.xi)
        print(f"phi = {phi:.17g}")
        print(f"re_a = {val.real:.17g}")
        print(f"im_a = {val.imag:.17g}")
        print(f"abs_a = {abs(val):.17g}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "compare":
            return _cmd_run(args, force_compare=True)
        return _cmd_oracle(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
