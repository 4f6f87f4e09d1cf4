"""Command-line interface for warpiso."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import NoReturn

from warpiso.config import apply_overrides, list_configs, resolve_config
from warpiso.constants import DEFAULT_SEED, DEFAULT_TOL_VERIFY, EXIT_OK, EXIT_USAGE
from warpiso.errors import WarpisoError
from warpiso.runtime import REPRO_NAMES, cmd_repro, cmd_sweep, exit_code_for, run_command

CONFIG_COMMANDS = ("check", "verify", "omega", "profile", "dido")


class _Parser(argparse.ArgumentParser):
    """Argument parser that exits with the usage code instead of 2."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    """Build CLI argument parser."""
    parser = _Parser(
        prog="warpiso",
        description="Relative isoperimetric inequality and Dido bounds for warped products.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    helps = {
        "check": "Certify positivity and log-convexity of the warping function.",
        "verify": "Compare a ceiling against its equal-volume constant ceiling.",
        "omega": "Lower bound of the isoperimetric profile and the volume bound.",
        "profile": "Sample the isoperimetric profile as CSV.",
        "dido": "Solve the Dido problem for a target ceiling area.",
    }
    for command in CONFIG_COMMANDS:
        sub = subparsers.add_parser(command, help=helps[command])
        sub.add_argument("--config", required=True, help="Config name or path to a config file.")
        sub.add_argument(
            "--set",
            dest="overrides",
            action="append",
            default=[],
            metavar="SECTION.KEY=VALUE",
            help="Override a config key (repeatable).",
        )
        sub.add_argument("--trace", type=Path, default=None, help="Optional JSONL trace path.")
        sub.add_argument("--output", type=Path, default=None, help="Optional CSV output path.")
        if command == "verify":
            sub.add_argument(
                "--csv-append", type=Path, default=None, help="Append the report as a CSV row."
            )

    repro_parser = subparsers.add_parser("repro", help="Reproduce a named profile example.")
    repro_parser.add_argument("name", choices=REPRO_NAMES)
    repro_parser.add_argument("--trace", type=Path, default=None, help="Optional JSONL trace path.")

    sweep_parser = subparsers.add_parser(
        "sweep", help="Verify random instances of the family e^{a t^2 + b t}."
    )
    sweep_parser.add_argument("--instances", type=int, default=200)
    sweep_parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sweep_parser.add_argument("--tol-verify", type=float, default=DEFAULT_TOL_VERIFY)
    sweep_parser.add_argument("--output", type=Path, default=None, help="Optional CSV output path.")
    sweep_parser.add_argument("--trace", type=Path, default=None, help="Optional JSONL trace path.")

    subparsers.add_parser("list-configs", help="List available configurations.")
    return parser


def run(argv: list[str] | None = None) -> int:
    """Parse `argv`, run the command and return its exit code."""
    args = build_parser().parse_args(argv)

    if args.command == "list-configs":
        for name in list_configs():
            print(name)
        return EXIT_OK

    try:
        if args.command == "repro":
            return cmd_repro(args.name, trace_path=args.trace)
        if args.command == "sweep":
            return cmd_sweep(
                args.instances,
                args.seed,
                tol_verify=args.tol_verify,
                output=args.output,
                trace_path=args.trace,
            )
        config = apply_overrides(resolve_config(args.config), args.overrides)
        return run_command(
            args.command,
            config,
            trace_path=args.trace,
            output=args.output,
            csv_append=getattr(args, "csv_append", None),
        )
    except WarpisoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exit_code_for(exc)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main(argv: list[str] | None = None) -> None:
    """CLI entrypoint."""
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
