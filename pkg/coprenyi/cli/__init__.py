"""Command line interface components for coprenyi.

Argument parsing and file handling. The command handlers and the async entry
point live in coprenyi.cli.commands and coprenyi.cli.main; console output is
shared with the library in coprenyi.console.
"""

from __future__ import annotations

from .args import CliUsageError, build_parser, parse_args
from .files import FileReader, FileWriter

__all__ = [
    "CliUsageError",
    "FileReader",
    "FileWriter",
    "build_parser",
    "parse_args",
]
