"""Unit tests for the CLI file handling module."""

from __future__ import annotations

import json
from typing import TYPE_CHECKING
from unittest.mock import MagicMock, patch

import pytest

from coprenyi.cli.files import FileReader, FileWriter, flatten

if TYPE_CHECKING:
    from pathlib import Path


@pytest.fixture
def records() -> list[dict]:
    """Fixture providing measure-like records with nested fields."""
    return [
        {"kind": "mccri", "gamma": 3.0, "value": 0.5, "integral": {"value": 0.25, "nodes_per_axis": 64}},
        {"kind": "mccri", "gamma": 4.0, "value": None, "integral": {"value": 0.125, "nodes_per_axis": 128}},
    ]


def test_file_reader_csv() -> None:
    """Test FileReader returns one dictionary per CSV row with stripped keys."""
    mock_path = MagicMock()
    mock_path.read_text.return_value = "x1, x2\n0.1,0.2\n0.3,0.4\n"

    reader = FileReader(path=mock_path, type="csv")

    expected = [{"x1": "0.1", "x2": "0.2"}, {"x1": "0.3", "x2": "0.4"}]
    if reader.data != expected:
        pytest.fail(f"CSV data mismatch. Expected {expected}, got {reader.data}")


def test_file_reader_csv_without_header() -> None:
    """Test FileReader rejects an empty CSV file."""
    mock_path = MagicMock()
    mock_path.read_text.return_value = ""

    with pytest.raises(ValueError, match="no header row"):
        FileReader(path=mock_path, type="csv")


def test_file_reader_json() -> None:
    """Test FileReader parses JSON as-is."""
    document = {"measures": [{"kind": "mccre", "copula_x": "product::2", "gamma": 3}]}
    mock_path = MagicMock()
    mock_path.read_text.return_value = json.dumps(document)

    reader = FileReader(path=mock_path, type="json")

    if reader.data != document:
        pytest.fail(f"JSON data mismatch. Expected {document}, got {reader.data}")


def test_file_reader_invalid_type() -> None:
    """Test FileReader with an invalid file type."""
    with pytest.raises(ValueError, match="Invalid file type: invalid"):
        FileReader(path=MagicMock(), type="invalid")


def test_flatten_nested_and_lists() -> None:
    """Test flatten produces dotted keys and JSON text for lists."""
    flat = flatten({"a": 1, "b": {"c": 2, "d": {"e": 3}}, "f": [1, 2]})

    expected = {"a": 1, "b.c": 2, "b.d.e": 3, "f": "[1, 2]"}
    if flat != expected:
        pytest.fail(f"Expected {expected}, got {flat}")


def test_file_writer_jsonl(records: list[dict], tmp_path: Path) -> None:
    """Test FileWriter writes one sorted-key JSON object per line."""
    target = tmp_path / "out.jsonl"

    FileWriter(path=target, type="jsonl", data=records)

    lines = target.read_text(encoding="utf-8").splitlines()
    if [json.loads(line) for line in lines] != records:
        pytest.fail(f"Round trip mismatch: {lines}")
    if not lines[0].startswith('{"gamma"'):
        pytest.fail(f"Keys should be sorted, got {lines[0]}")


def test_file_writer_csv(records: list[dict]) -> None:
    """Test FileWriter flattens rows before handing them to DictWriter."""
    mock_path = MagicMock()
    mock_writer = MagicMock()

    with patch("coprenyi.cli.files.DictWriter", return_value=mock_writer) as mock_dict_writer_cls:
        FileWriter(path=mock_path, type="csv", data=records)

        _, kwargs = mock_dict_writer_cls.call_args
        expected = ["kind", "gamma", "value", "integral.value", "integral.nodes_per_axis"]
        if kwargs["fieldnames"] != expected:
            pytest.fail(f"Expected fieldnames {expected}, got {kwargs['fieldnames']}")
        mock_writer.writeheader.assert_called_once()
        if mock_writer.writerow.call_count != 2:
            pytest.fail(f"Expected 2 writerow calls, got {mock_writer.writerow.call_count}")
    mock_path.write_text.assert_called_once()


def test_file_writer_csv_on_disk(records: list[dict], tmp_path: Path) -> None:
    """Test the CSV written to disk has a header and one line per record."""
    target = tmp_path / "out.csv"

    FileWriter(path=target, type="csv", data=records)

    lines = target.read_text(encoding="utf-8").splitlines()
    if lines[0] != "kind,gamma,value,integral.value,integral.nodes_per_axis":
        pytest.fail(f"Unexpected header {lines[0]}")
    if lines[1:] != ["mccri,3.0,0.5,0.25,64", "mccri,4.0,,0.125,128"]:
        pytest.fail(f"Unexpected rows {lines[1:]}")


def test_file_writer_csv_unions_columns(tmp_path: Path) -> None:
    """Test records with different keys share one header and leave absent cells blank."""
    target = tmp_path / "union.csv"

    FileWriter(path=target, type="csv", data=[{"a": 1}, {"b": 2}, {"a": 3, "b": 4}])

    lines = target.read_text(encoding="utf-8").splitlines()
    if lines != ["a,b", "1,", ",2", "3,4"]:
        pytest.fail(f"Unexpected CSV {lines}")


def test_file_writer_stdout(records: list[dict], capsys: pytest.CaptureFixture[str]) -> None:
    """Test a missing path writes to standard output."""
    FileWriter(path=None, type="jsonl", data=records[:1])

    out = capsys.readouterr().out
    if json.loads(out) != records[0]:
        pytest.fail(f"Expected the first record on stdout, got {out!r}")


def test_file_writer_pretty(records: list[dict], tmp_path: Path) -> None:
    """Test the pretty table lists every flattened column."""
    target = tmp_path / "out.txt"

    FileWriter(path=target, type="pretty", data=records)

    text = target.read_text(encoding="utf-8")
    for column in ("kind", "integral.nodes_per_axis", "0.125"):
        if column not in text:
            pytest.fail(f"Expected {column!r} in the table:\n{text}")


def test_file_writer_invalid_type(records: list[dict]) -> None:
    """Test FileWriter with an invalid file type."""
    with pytest.raises(ValueError, match="Invalid file type: invalid"):
        FileWriter(path=MagicMock(), type="invalid", data=records)
