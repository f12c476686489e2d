"""File handling for the CLI: CSV/JSON input and structured record output."""

from __future__ import annotations

import sys
from csv import DictReader, DictWriter
from dataclasses import dataclass, field
from io import StringIO
from json import dumps as json_dumps, loads as json_loads
from typing import TYPE_CHECKING, Any, Literal

from rich.console import Console
from rich.table import Table

if TYPE_CHECKING:
    from pathlib import Path

    from coprenyi.types import JSON_TYPE


def flatten(record: dict[str, Any], prefix: str = "") -> dict[str, Any]:
    """Flatten nested dictionaries into dotted keys; lists become JSON text.

    Returns:
        Single-level dictionary
    """
    flat: dict[str, Any] = {}
    for key, value in record.items():
        name = f"{prefix}{key}"
        # Nested results (integral, config) become dotted columns such as integral.value
        if isinstance(value, dict):
            flat |= flatten(value, f"{name}.")
        elif isinstance(value, list | tuple):
            # Keep sequences in one cell so every record has the same columns
            flat[name] = json_dumps(value, sort_keys=True)
        else:
            flat[name] = value
    return flat


@dataclass(slots=True)
class FileReader:
    """Read a dataset or configuration file.

    CSV files are read as a list of row dictionaries keyed by the header row;
    JSON files are parsed as-is.
    """

    path: Path
    type: Literal["csv", "json"]
    data: JSON_TYPE = field(init=False)

    def __post_init__(self) -> None:
        """Load the file.

        Raises:
            ValueError: If the file type is invalid or the CSV has no header row.
        """
        match self.type:
            case "csv":
                # Header names are stripped so " x2" and "x2" select the same column
                reader = DictReader(self.path.read_text(encoding="utf-8").splitlines())
                if not reader.fieldnames:
                    msg = f"{self.path} has no header row"
                    raise ValueError(msg)
                self.data = [{key.strip(): value for key, value in row.items()} for row in reader]
            case "json":
                self.data = json_loads(self.path.read_text(encoding="utf-8"))
            case _:
                msg = f"Invalid file type: {self.type}"
                raise ValueError(msg)


@dataclass(slots=True)
class FileWriter:
    """Write records as JSON lines, CSV or a pretty table.

    A path of None writes to standard output.
    """

    path: Path | None
    type: Literal["csv", "jsonl", "pretty"]
    data: list[dict[str, Any]]

    def __post_init__(self) -> None:
        """Render and write the records.

        Raises:
            ValueError: If the file type is invalid.
        """
        match self.type:
            case "jsonl":
                # One sorted-key object per line; reruns with the same inputs are byte-identical
                self._emit("".join(json_dumps(row, sort_keys=True) + "\n" for row in self.data))
            case "csv":
                rows = [flatten(row) for row in self.data]
                # Union of every record's keys in first-seen order; missing cells stay blank
                fieldnames = list(dict.fromkeys(key for row in rows for key in row))
                buffer = StringIO()
                writer = DictWriter(buffer, fieldnames=fieldnames, lineterminator="\n")
                writer.writeheader()
                [writer.writerow(row) for row in rows]
                self._emit(buffer.getvalue())
            case "pretty":
                rows = [flatten(row) for row in self.data]
                table = Table(show_lines=False)
                columns = list(dict.fromkeys(key for row in rows for key in row))
                [table.add_column(column, overflow="fold") for column in columns]
                [table.add_row(*(_cell(row.get(column)) for column in columns)) for row in rows]
                if self.path is None:
                    Console(file=sys.stdout).print(table)
                else:
                    # A fixed width so the saved table does not depend on the terminal
                    with self.path.open("w", encoding="utf-8") as handle:
                        Console(file=handle, width=200).print(table)
            case _:
                msg = f"Invalid file type: {self.type}"
                raise ValueError(msg)

    def _emit(self, content: str) -> None:
        if self.path is None:
            sys.stdout.write(content)
            sys.stdout.flush()
        else:
            self.path.write_text(content, encoding="utf-8")


def _cell(value: Any) -> str:
    if value is None:
        return "-"
    # Enough digits to tell close measure values apart in the table
    if isinstance(value, float):
        return f"{value:.10g}"
    return str(value)
