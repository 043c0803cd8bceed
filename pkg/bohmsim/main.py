"""
bohmsim/main.py
Command-line entry point: argument parsing, logging setup, config resolution
and dispatch to the subcommands.
"""
from __future__ import annotations

import argparse
import logging
import sys
from typing import Sequence

from pydantic import ValidationError

from bohmsim import __version__
from bohmsim.commands import boost, metric, snapshot, trajectories, velocity, verify
from bohmsim.config import settings
from bohmsim.errors import BohmSimError, ConfigError
from bohmsim.schemas.base import RunConfig

logger = logging.getLogger(__name__)

COMMANDS = (velocity, trajectories, snapshot, boost, metric, verify)
LOG_FORMAT = "%(levelname)-5.5s [%(name)s] %(message)s"

EXIT_OK = 0
EXIT_CHECKS_FAILED = 1
EXIT_ERROR = 2


# ─── Parser ───────────────────────────────────────────────────────────────────

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", type=str, default=None, help="JSON run configuration")
    p.add_argument("--out", type=str, default=None, help="Output directory (default: config out_dir or BOHM_SIM_OUTPUT_DIR)")
    p.add_argument("--seed", type=int, default=None, help="RNG seed for ensemble sampling")
    p.add_argument("--dispersion", choices=["optical", "paraxial"], default=None)
    p.add_argument("--kz", type=float, default=None, help="Longitudinal wavenumber (paraxial)")
    p.add_argument("--theta", type=float, default=None, help="Boost velocity, |theta| < 1")
    p.add_argument("--t", type=float, action="append", default=None, help="Snapshot time (repeatable)")
    p.add_argument("--quiet", action="store_true", help="Only log warnings and errors")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bohmsim",
        description="Relativistic two-photon Bohmian trajectories, weak values and their checks.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    parents = [_common()]
    for module in COMMANDS:
        module.register(subparsers, parents)
    return parser


# ─── Config resolution ────────────────────────────────────────────────────────

def resolve_config(args: argparse.Namespace) -> RunConfig:
    """
    Load --config (or defaults) and apply the flag overrides.

    Raises
    ------
    ConfigError : unreadable or invalid config, or overrides that break it.
    """
    run = RunConfig.load(args.config) if args.config else RunConfig()
    data = run.model_dump()
    if args.dispersion is not None:
        data["dispersion"] = args.dispersion
    if args.kz is not None:
        data["kz"] = args.kz
    if args.theta is not None:
        data["theta"] = args.theta
    if args.out is not None:
        data["out_dir"] = args.out
    if args.seed is not None:
        if data.get("ensemble") is not None:
            data["ensemble"]["seed"] = args.seed
        elif not data.get("ics"):
            data["ensemble"] = {"seed": args.seed}
    try:
        return RunConfig.model_validate(data)
    except ValidationError as exc:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err.get('loc', ())) or '<root>'}: {err['msg']}" for err in exc.errors()
        )
        raise ConfigError(f"command-line overrides: {problems}") from exc


def configure_logging(quiet: bool) -> None:
    level = logging.WARNING if quiet else getattr(logging, settings.LOG_LEVEL.upper(), logging.INFO)
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


# ─── Entry point ──────────────────────────────────────────────────────────────

def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.quiet)
    try:
        run = resolve_config(args)
        return args.handler(run, args)
    except BohmSimError as exc:
        logger.error("%s failed: %s", args.command, exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
