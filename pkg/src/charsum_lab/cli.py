"""Command-line entry point.

    charsum-lab <experiment> [--q-max N] [--p-max N] [--eps LIST]
                [--profile a=logpow:4,R=logpow:2.5,c=logpow:3,l=const:1]
                [--seed S] [--out PATH] [--format json|csv] [--config FILE]
                [--workers N] [--no-figures] ...

Exit codes: 0 success, 2 identity-suite violation, 1 usage or domain error.
When --out is given the report is written there and matplotlib figures are
rendered alongside it (suppress with --no-figures); otherwise the JSON
report goes to stdout.
"""

from __future__ import annotations

import argparse
import sys

from .errors import DomainError, UsageError
from .experiments import EXPERIMENTS, ExperimentConfig, run_experiment
from .report import emit, to_json_bytes


class _Parser(argparse.ArgumentParser):
    # usage problems must exit 1, not argparse's default 2
    def error(self, message):
        raise UsageError(message)


# CLI option name -> configuration key
_OPTION_KEYS = {
    "q_max": "q_max",
    "p_max": "p_max",
    "p_min": "p_min",
    "eps": "eps",
    "profile": "profile",
    "seed": "seed",
    "workers": "workers",
    "T": "T",
    "x_mult": "x_mult",
    "horizon_exp": "horizon_exp",
    "grid_density": "grid_density",
    "char_samples": "char_samples",
    "b_regime": "b_regime",
    "x_exponents": "x_exponents",
    "u_list": "u_list",
    "sample_target": "sample_target",
    "function": "function",
    "q_grid": "q_grid",
}


def build_parser() -> _Parser:
    parser = _Parser(
        prog="charsum-lab",
        description="Character-sum laboratory: identity suites and bound-ratio scans.",
    )
    parser.add_argument("experiment", choices=EXPERIMENTS)
    parser.add_argument("--config", help="flat key=value configuration file")
    parser.add_argument("--q-max", dest="q_max", type=int)
    parser.add_argument("--p-max", dest="p_max", type=int)
    parser.add_argument("--p-min", dest="p_min", type=int)
    parser.add_argument("--eps", help="comma list of rationals, e.g. 0.1,0.25,1/3")
    parser.add_argument("--profile", help="bound profile string")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--workers", type=int)
    parser.add_argument("--T", dest="T", type=float)
    parser.add_argument("--x-mult", dest="x_mult", type=float)
    parser.add_argument("--horizon-exp", dest="horizon_exp", type=float)
    parser.add_argument("--grid-density", dest="grid_density", type=int)
    parser.add_argument("--char-samples", dest="char_samples", type=int)
    parser.add_argument("--b-regime", dest="b_regime", type=float)
    parser.add_argument("--x-exponents", dest="x_exponents")
    parser.add_argument("--u-list", dest="u_list")
    parser.add_argument("--sample-target", dest="sample_target", type=int)
    parser.add_argument("--function", help="multiplicative function spec")
    parser.add_argument("--q-grid", dest="q_grid")
    parser.add_argument("--out", help="report output path")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument(
        "--figures",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="render figures next to --out",
    )
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        config = (
            ExperimentConfig.from_file(args.config)
            if args.config
            else ExperimentConfig()
        )
        for opt, key in _OPTION_KEYS.items():
            value = getattr(args, opt, None)
            if value is not None:
                setattr(config, key, value)
        report = run_experiment(args.experiment, config)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 1

    try:
        if args.out:
            emit(report, args.format, args.out)
            written = [args.out]
            if args.figures:
                from .plotting import render_figures

                written += [str(p) for p in render_figures(report, args.out)]
            print(
                f"{report.experiment}: {len(report.rows)} rows in "
                f"{report.timing:.2f}s -> {', '.join(written)}",
                file=sys.stderr,
            )
        else:
            sys.stdout.write(to_json_bytes(report).decode("ascii"))
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 1

    if report.experiment == "verify-identities" and report.summary.get("violations"):
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
