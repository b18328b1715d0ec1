"""Command-line entry point: ``run``, ``oracle`` and ``report``."""

import argparse
import sys
from pathlib import Path

from . import antenna, harness
from .problem import ConfigurationError


def _cmd_run(args):
    config = harness.load_config(args.config, seed=args.seed, out=args.out)
    summary, _ = harness.run_campaign(config, sequential=args.sequential)
    print(harness.compare_report([summary]), end="")
    if config.out:
        print(f"wrote {config.trials} traces and summary.txt to {config.out}")
    return 0


def _cmd_oracle(args):
    config = harness.load_config(args.config, seed=args.seed, out=args.out)
    if config.problem_kind != "antenna":
        raise ConfigurationError("oracle needs an antenna configuration (problem = antenna)")
    lines = ["trial seed msv evaluations selection"]
    for t in range(config.trials):
        seed = config.trial_seed(t)
        inst = antenna.generate_channel(config.d, config.m, seed, config.alpha, config.beta)
        res = antenna.exhaustive_msv(inst, config.k)
        chosen = ",".join(str(i) for i in res.selection.nonzero()[0])
        lines.append(f"{t} {seed} {res.msv:.17e} {res.evaluations} {chosen}")
    text = "\n".join(lines) + "\n"
    print(text, end="")
    if config.out:
        out = Path(config.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "oracle.txt").write_text(text)
    return 0


def _cmd_report(args):
    summaries = [harness.load_summary(p) for p in args.paths]
    print(harness.compare_report(summaries), end="")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="sublation", description="Seeded optimization campaigns.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a campaign from a config file")
    oracle = sub.add_parser("oracle", help="exhaustive antenna-selection search")
    for p in (run, oracle):
        p.add_argument("--config", required=True, metavar="PATH")
        p.add_argument("--seed", type=int, metavar="N", help="override the base seed")
        p.add_argument("--out", metavar="DIR", help="override the output directory")
    run.add_argument("--sequential", action="store_true", help="run trials in this process")
    run.set_defaults(func=_cmd_run)
    oracle.set_defaults(func=_cmd_oracle)

    report = sub.add_parser("report", help="tabulate finished campaigns")
    report.add_argument("paths", nargs="+", metavar="DIR", help="campaign directories or summary files")
    report.set_defaults(func=_cmd_report)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigurationError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
