"""Command-line entry point: ``mf <experiment> [options]``."""

from __future__ import annotations

import argparse
import os
import sys

COMMANDS = ("field", "mellin", "frobclass", "moments", "sidon", "variance", "jacobian", "lhat", "detratio")


def build_parser():
    parser = argparse.ArgumentParser(prog="mf", description="Mellin sums over finite fields: experiments.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", help="key = value file for the experiment")
    parser.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override a single config key (repeatable)")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--out", help="directory for the JSON report and CSV tables")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--average", choices=("cesaro", "none"))
    parser.add_argument("--threads", type=int, help="cap on BLAS/FFT threads")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.threads:
        # must happen before numpy is imported
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ[var] = str(args.threads)
    from . import experiments as ex

    try:
        if args.config:
            cfg = ex.load_config(args.config, args.command)
            values = dict(cfg.params)
            values.update(seed=cfg.seed, average=cfg.average, cesaro_n=cfg.cesaro_n)
        else:
            values = {}
        for item in args.set:
            if "=" not in item:
                raise ex.ConfigError(f"--set expects KEY=VALUE, got {item!r}")
            key, value = item.split("=", 1)
            values[key.strip()] = value.strip()
        if args.seed is not None:
            values["seed"] = args.seed
        if args.average is not None:
            values["average"] = args.average
        cfg = ex.make_config(args.command, values)
    except ex.ConfigError as exc:
        print(f"mf: config error: {exc}", file=sys.stderr)
        return 2

    report = ex.run(args.command, cfg)
    if args.out:
        for path in report.write(args.out, args.format):
            print(path)
    elif args.format == "json":
        print(report.to_json())
    else:
        for key in sorted(report.tables):
            print(f"# {key}")
            print(report.table_csv(key), end="")
    for line in report.summary_lines():
        print(line, file=sys.stderr)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
