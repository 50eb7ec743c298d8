"""Batch verification runner.

Subcommands:
  verify <suite>   run a named suite (or a single check) and emit a report
  report --in F    summarize a previously emitted JSON report
  list-checks      print every registered check name

Flags: --config PATH (JSON scenario), --format json|text, --seed N
(overrides the config seed).  Exit codes: 0 all records pass, 1 a check
failed, 2 configuration errors.  Identical configs produce byte-identical
JSON reports: every check seeds its own generator from (seed, check name)
and records are ordered by check name and parameters.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .checks import CHECKS, SUITES, ConfigError, ScenarioConfig


@dataclass(frozen=True)
class Report:
    """Per-check records plus a consistent summary."""

    records: Tuple[dict, ...]
    summary: dict

    @staticmethod
    def build(records: Sequence[dict]) -> "Report":
        ordered = tuple(sorted(records, key=lambda r: (r["check"], _param_key(r))))
        passed = sum(1 for r in ordered if r["pass"])
        summary = {"total": len(ordered), "passed": passed, "failed": len(ordered) - passed}
        return Report(ordered, summary)

    def to_json(self) -> dict:
        return {"records": list(self.records), "summary": self.summary}

    @staticmethod
    def from_json(data: dict) -> "Report":
        records = tuple(data["records"])
        report = Report.build(records)
        if report.summary != data["summary"]:
            raise ConfigError("report summary inconsistent with records")
        return report


def _param_key(record: dict) -> str:
    return json.dumps(record.get("params", {}), sort_keys=True)


def run(config: ScenarioConfig, checks: Optional[Sequence[str]] = None) -> Report:
    """Execute the named checks (default: the config's list) and assemble
    the report; a failing check is a failing record and never an error."""
    names = tuple(checks if checks is not None else config.checks)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise ConfigError(f"unknown checks: {unknown}")
    records: List[dict] = []
    for name in names:
        records.extend(CHECKS[name](config))
    return Report.build(records)


def emit(report: Report, format: str = "json") -> str:
    """Render the report: stable-key-ordered JSON or a text summary table."""
    if format == "json":
        return json.dumps(report.to_json(), sort_keys=True, separators=(",", ":")) + "\n"
    if format != "text":
        raise ConfigError(f"unknown format {format!r}")
    lines = []
    width = max([len(r["check"]) for r in report.records], default=5)
    for r in report.records:
        status = "PASS" if r["pass"] else "FAIL"
        lines.append(
            f"{status}  {r['check']:<{width}}  residual={r['max_residual']:.3e}"
            f"  tol={r['tolerance']:.1e}  samples={r['samples']}  {_param_key(r)}"
        )
    s = report.summary
    lines.append(f"summary: total={s['total']} passed={s['passed']} failed={s['failed']}")
    return "\n".join(lines) + "\n"


def parse_report(text: str) -> Report:
    return Report.from_json(json.loads(text))


def _load_config(path: Optional[str], seed: Optional[int]) -> ScenarioConfig:
    if path is None:
        cfg = ScenarioConfig()
    else:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as e:
            raise ConfigError(f"cannot read config: {e}") from e
        except json.JSONDecodeError as e:
            raise ConfigError(f"config is not valid JSON: {e}") from e
        cfg = ScenarioConfig.from_json(data)
    if seed is not None:
        cfg = dataclasses.replace(cfg, seed=seed)
    return cfg


def _suite_checks(suite: str, config: ScenarioConfig) -> Tuple[str, ...]:
    if suite == "config":
        if not config.checks:
            raise ConfigError("suite 'config' needs a config with a checks list")
        return tuple(config.checks)
    if suite in SUITES:
        return SUITES[suite]
    if suite in CHECKS:
        return (suite,)
    raise ConfigError(f"unknown suite or check {suite!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="causalloops",
                                     description="causal loop net verification runner")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="run a suite or a single check")
    verify.add_argument("suite", help="suite name, check name, or 'config'")
    verify.add_argument("--config", default=None, help="JSON scenario config path")
    verify.add_argument("--format", default="text", choices=("json", "text"))
    verify.add_argument("--seed", type=int, default=None, help="override the config seed")

    report = sub.add_parser("report", help="summarize a JSON report")
    report.add_argument("--in", dest="infile", required=True, help="report file")
    report.add_argument("--format", default="text", choices=("json", "text"))

    sub.add_parser("list-checks", help="list registered checks")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "list-checks":
        for name in sorted(CHECKS):
            print(name)
        return 0

    if args.command == "report":
        try:
            with open(args.infile, "r", encoding="utf-8") as fh:
                report = parse_report(fh.read())
        except (OSError, json.JSONDecodeError, KeyError, ConfigError) as e:
            print(f"error: {e}", file=sys.stderr)
            return 2
        sys.stdout.write(emit(report, args.format))
        return 0 if report.summary["failed"] == 0 else 1

    try:
        config = _load_config(args.config, args.seed)
        names = _suite_checks(args.suite, config)
        report = run(config, names)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    sys.stdout.write(emit(report, args.format))
    return 0 if report.summary["failed"] == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
