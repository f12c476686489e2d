"""Command line argument parser for coprenyi.

The parser is built from the tables in coprenyi.constants: global options on
the top-level parser and one sub-command per operation, each with its own
arguments and output options.
"""

from __future__ import annotations

from argparse import (
    ArgumentParser,
    Namespace as Arguments,
    RawDescriptionHelpFormatter as Formatter,
)
from importlib.metadata import version
from sys import argv as sys_argv, exit as sys_exit
from typing import TYPE_CHECKING, NoReturn

from coprenyi.console import log
from coprenyi.constants import (
    CLI_COMMANDS,
    CLI_GLOBAL_ARGUMENTS,
    CLI_HELP_DESCRIPTION,
    CLI_HELP_EPILOGUE,
    CLI_HELP_NAME,
    CLI_OUTPUT_ARGUMENTS,
)

if TYPE_CHECKING:
    from collections.abc import Sequence


class CliUsageError(ValueError):
    """Invalid command line (unknown flag, missing argument, bad choice)."""


class CliParser(ArgumentParser):
    """ArgumentParser that raises instead of exiting on usage errors."""

    def error(self, message: str) -> NoReturn:
        """Raise a usage error carrying argparse's message.

        Raises:
            CliUsageError: Always.
        """
        msg = f"{self.prog}: {message}"
        raise CliUsageError(msg)


def build_parser() -> CliParser:
    """Create the top-level parser with one sub-parser per command.

    Returns:
        Configured parser
    """
    parser = CliParser(
        description=CLI_HELP_DESCRIPTION,
        epilog=CLI_HELP_EPILOGUE,
        prog=CLI_HELP_NAME,
        formatter_class=Formatter,
    )
    parser.add_argument("-V", "--version", action="version", version=version("coprenyi"))
    parser.add_argument("-v", "--verbose", action="count", default=0, help="show extra logging during run")
    [parser.add_argument(*flags, **kwargs) for flags, kwargs in CLI_GLOBAL_ARGUMENTS]
    commands = parser.add_subparsers(dest="command", metavar="command", required=True)
    for name, spec in CLI_COMMANDS.items():
        command = commands.add_parser(
            name,
            help=spec["help"],
            description=spec["help"],
            epilog=CLI_HELP_EPILOGUE,
            formatter_class=Formatter,
        )
        [command.add_argument(*flags, **kwargs) for flags, kwargs in spec["arguments"]]
        output = command.add_argument_group("output")
        [output.add_argument(*flags, **kwargs) for flags, kwargs in CLI_OUTPUT_ARGUMENTS]
        if "default_format" in spec:
            command.set_defaults(format=spec["default_format"])
    return parser


def set_verbosity(verbose: int) -> None:
    """Map the -v count onto the package log level."""
    if verbose >= 2:  # noqa: PLR2004
        log.setLevel("DEBUG")
    elif verbose == 1:
        log.setLevel("INFO")
    else:
        log.setLevel("WARNING")


def parse_args(argv: Sequence[str] | None = None) -> Arguments:
    """Parse the command line.

    Args:
        argv: Arguments without the program name (default: sys.argv[1:])

    Returns:
        Parsed arguments

    Raises:
        CliUsageError: If the command line is invalid.
    """
    parser = build_parser()
    arguments = sys_argv[1:] if argv is None else list(argv)

    # Check if no arguments are provided
    if not arguments:
        parser.print_help()
        sys_exit(0)

    parsed_args = parser.parse_args(arguments)
    set_verbosity(parsed_args.verbose)
    return parsed_args
