"""
Main entry point for the valuations-at-infinity toolkit.

Exit codes: 0 ok, 1 usage/IO/parse error, 2 mathematically invalid input,
3 search or expansion budget exhausted.
"""
from dataclasses import replace
from typing import List, Optional
import argparse
import logging
import sys
import os

from commands import COMMANDS
from config import get_config, load_config, set_config, setup_logging

USAGE_EXIT_CODE = 1


class ArgumentParser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_EXIT_CODE, f"{self.prog}: error: {message}\n")


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(
        prog="valuations",
        description="Delta-sequences, semigroups, dual graphs and curves of plane valuations at infinity"
    )
    parser.add_argument('--config', help='JSON configuration file')
    parser.add_argument('--log-level', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'],
                        help='Logging level (default: from configuration)')
    subparsers = parser.add_subparsers(dest='command', metavar='COMMAND', parser_class=ArgumentParser)
    subparsers.required = True
    for command_class in COMMANDS:
        sub = subparsers.add_parser(command_class.name, help=command_class.help)
        command_class.add_arguments(sub)
        sub.set_defaults(command_class=command_class)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        if args.config:
            if not os.path.isfile(args.config):
                raise FileNotFoundError(f"configuration file not found: {args.config}")
            set_config(load_config(args.config))
        logging_config = get_config().logging
        if args.log_level:
            logging_config = replace(logging_config, log_level=args.log_level)
        setup_logging(logging_config)
    except Exception as e:
        print(f"valuations: configuration error: {type(e).__name__}: {e}", file=sys.stderr)
        return USAGE_EXIT_CODE
    logging.getLogger(__name__).debug("command %s", args.command)

    result = args.command_class().run(args)
    rendered = result.render()
    if rendered is not None:
        sys.stdout.write(rendered if rendered.endswith("\n") else rendered + "\n")
    if result.error:
        print(f"valuations {result.command_name}: {result.error}", file=sys.stderr)
    return result.exit_code


if __name__ == "__main__":
    exit(main())
