"""Command line: ``zpflab run``, ``zpflab suite``, ``zpflab schema``.

Exit codes: 0 every check passed, 1 a check failed, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import CONFIG_SCHEMA, load_config
from .errors import ConfigError
from .report import RunReport, emit_trace

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse exits 2 already; keep the message short
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _seed(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError("seed must be non-negative")
    return value


def _samples(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1000:
        raise argparse.ArgumentTypeError("need at least 1000 samples")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="zpflab", description="Verification runs for the random-phase field toolkit.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    run = sub.add_parser("run", help="run one scenario config")
    run.add_argument("config", help="scenario JSON file")
    run.add_argument("--out", metavar="DIR", help="write report.json (and trace.csv) here")
    run.add_argument("--seed", type=_seed, help="override params.seed")
    run.add_argument("--samples", type=_samples, help="override params.samples")
    run.add_argument("--quiet", action="store_true", help="no table on stdout")
    suite = sub.add_parser("suite", help="run the full acceptance battery")
    suite.add_argument("--out", metavar="DIR", help="write report.json here")
    suite.add_argument("--quiet", action="store_true")
    sub.add_parser("schema", help="print the scenario config JSON schema")
    return p


def _write(report: RunReport, out: str | None) -> None:
    if not out:
        return
    d = Path(out)
    d.mkdir(parents=True, exist_ok=True)
    report.write_json(d / "report.json")
    if report.trace_columns:
        emit_trace(report, d / "trace.csv")


def _cmd_run(args) -> int:
    from .runner import run_scenario

    cfg = load_config(args.config)
    cfg = cfg.with_params(seed=args.seed, samples=args.samples)
    if cfg.experiment == "full-suite":
        return _cmd_suite(args)
    report = run_scenario(cfg)
    _write(report, args.out)
    if not args.quiet:
        print(report.table())
    return EXIT_PASS if report.passed else EXIT_FAIL


def _cmd_suite(args) -> int:
    from .suite import run_suite

    echo = None if args.quiet else print
    report = RunReport("full-suite")
    for res in run_suite(echo):
        report.add(res.to_record())
    _write(report, args.out)
    if not args.quiet:
        ok = sum(r.passed for r in report.records)
        print(f"full-suite: {'PASS' if report.passed else 'FAIL'} ({ok}/{len(report.records)} criteria)")
    return EXIT_PASS if report.passed else EXIT_FAIL


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "schema":
            print(json.dumps(CONFIG_SCHEMA, indent=2))
            return EXIT_PASS
        if args.command == "suite":
            return _cmd_suite(args)
        return _cmd_run(args)
    except ConfigError as exc:
        print(f"zpflab: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"zpflab: {exc}", file=sys.stderr)
        return EXIT_USAGE


__all__ = ["main", "build_parser"]
