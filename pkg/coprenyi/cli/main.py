"""Main entry point for the coprenyi CLI."""

from __future__ import annotations

from typing import TYPE_CHECKING

from coprenyi.console import log
from coprenyi.types import NumericalFailureError

from .args import parse_args
from .commands import run_command
from .files import FileWriter

if TYPE_CHECKING:
    from collections.abc import Sequence

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERIC = 2


async def main(argv: Sequence[str] | None = None) -> int:
    """Parse the command line, run the command and write its records.

    Args:
        argv: Arguments without the program name (default: sys.argv[1:])

    Returns:
        Exit code: 0 on success, 1 for usage or input errors, 2 for numerical failures
    """
    try:
        args = parse_args(argv)
        records = await run_command(args)
        FileWriter(args.output, args.format, records)
    except NumericalFailureError as e:
        log.error("Numerical failure: %s", e)  # noqa: TRY400
        return EXIT_NUMERIC
    except (ValueError, OSError) as e:
        log.error("%s", e)  # noqa: TRY400
        return EXIT_USAGE
    return EXIT_OK
