"""
bohmsim/commands/verify.py
`verify` subcommand: run the property suite and write the JSON report.
"""
from __future__ import annotations

import argparse
import logging
from pathlib import Path
from typing import Sequence

from bohmsim.checks.suite import REGISTRY, run_suite
from bohmsim.commands.common import output_dir
from bohmsim.schemas.base import RunConfig, SuiteReport
from bohmsim.tools.export import write_json

logger = logging.getLogger(__name__)

REPORT_NAME = "verify_report.json"


def cmd_verify(run: RunConfig, checks: Sequence[str] | None = None, out: str | None = None) -> tuple[SuiteReport, Path]:
    report = run_suite(run, checks)
    path = write_json(output_dir(run, out) / REPORT_NAME, report.model_dump(mode="json"))
    return report, path


def register(subparsers: argparse._SubParsersAction, parents: list[argparse.ArgumentParser]) -> None:
    p = subparsers.add_parser("verify", parents=parents, help="Run the verification suite")
    p.add_argument(
        "--check",
        action="append",
        choices=list(REGISTRY),
        dest="checks",
        help="Run only this check (repeatable); slow checks run only when named",
    )
    p.set_defaults(handler=handle)


def handle(run: RunConfig, args: argparse.Namespace) -> int:
    report, path = cmd_verify(run, args.checks, args.out)
    for check in report.checks:
        status = "ok  " if check.passed else "FAIL"
        print(f"{status} {check.name:<18} {check.duration_ms or 0:>7d}ms {check.error or ''}")
    print(f"report: {path}")
    return 0 if report.passed else 1
