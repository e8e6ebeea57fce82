"""Command-line entry point.

Subcommands ``vrw``, ``protein`` and ``whitworth`` run the matching
experiment and print (or write) a report.  Exit codes: 0 on success, 2
when ``--assert`` is given and the run misses its pass/fail band, 1 on
any runtime error.
"""

from __future__ import annotations

import argparse
import sys

from . import experiments
from .experiments import ExperimentConfig


def _add_common(sub: argparse.ArgumentParser, sampled: bool) -> None:
    sub.add_argument("--config", metavar="PATH", help="JSON config file")
    sub.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    sub.add_argument("--format", choices=("json", "csv"), default="json")
    sub.add_argument(
        "--assert",
        dest="assert_thresholds",
        action="store_true",
        help="exit 2 unless the run meets its pass/fail band",
    )
    if sampled:
        sub.add_argument("--seed", type=int, help="base seed; chain r uses seed + r")
        sub.add_argument("--repeats", type=int, help="number of independent chains")
        sub.add_argument("--ablation", action="store_true", help="drop the reference denominator")
        sub.add_argument(
            "--identity-check",
            action="store_true",
            help="set target = reference; the posterior must reproduce the prior",
        )
        sub.add_argument(
            "--emit-histograms",
            metavar="PATH",
            help="write histogram series as CSV to PATH",
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="probkin",
        description="Probability-kinematics updates on random walks, backbones and horses.",
    )
    subs = parser.add_subparsers(dest="command", required=True)
    vrw = subs.add_parser("vrw", help="von Mises random walk experiment")
    _add_common(vrw, sampled=True)
    protein = subs.add_parser("protein", help="backbone end-to-end distance experiment")
    _add_common(protein, sampled=True)
    protein.add_argument(
        "--emit-coords",
        metavar="PATH",
        help="write thinned posterior conformations as PDB text to PATH",
    )
    whitworth = subs.add_parser("whitworth", help="exact discrete three-horse update")
    _add_common(whitworth, sampled=False)
    return parser


def _build_config(args: argparse.Namespace) -> ExperimentConfig:
    if args.config:
        config = ExperimentConfig.load(args.config)
        data = config.to_dict()
    else:
        data = {}
    data["experiment"] = args.command
    for name, key in (("seed", "seed"), ("repeats", "repeats")):
        value = getattr(args, name, None)
        if value is not None:
            data[key] = value
    if getattr(args, "ablation", False):
        data["ablation"] = True
    if getattr(args, "identity_check", False):
        data["identity_check"] = True
    return ExperimentConfig.from_dict(data)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _build_config(args)
        report = experiments.run_experiment(config)
        if args.out:
            experiments.emit_report(report, args.out, args.format)
        else:
            text = report.to_json() if args.format == "json" else experiments.report_csv(report)
            sys.stdout.write(text if text.endswith("\n") else text + "\n")
        if getattr(args, "emit_histograms", None):
            with open(args.emit_histograms, "w", encoding="utf-8") as fh:
                fh.write(experiments.histograms_csv(report))
        if getattr(args, "emit_coords", None):
            with open(args.emit_coords, "w", encoding="utf-8") as fh:
                fh.write(experiments.protein_coords_pdb(report))
        if args.assert_thresholds:
            ok, failures = experiments.thresholds_pass(report)
            if not ok:
                for line in failures:
                    print(f"threshold failure: {line}", file=sys.stderr)
                return 2
    except Exception as exc:  # runtime errors map to exit code 1
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
