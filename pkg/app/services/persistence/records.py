"""
Run records as CSV (metrics only) or JSON (metrics, config, status, meta).

CSV header is exactly RECORD_COLUMNS; floats are written in their shortest
round-trip decimal form.
"""

import csv
import json
import logging
from pathlib import Path

from pydantic import ValidationError

from app.core.exceptions import DomainError, RecordsParseError
from app.pydantic_models.experiment import RecordRow, RunRecords
from app.utils.constants import RECORD_COLUMNS

logger = logging.getLogger(__name__)


def _format(value: float | int) -> str:
    return str(value) if isinstance(value, int) else repr(float(value))


def _suffix_format(path: Path, fmt: str | None) -> str:
    """Explicit format, else json for a .json suffix and csv for anything else."""
    if fmt is None:
        return "json" if path.suffix.lower() == ".json" else "csv"
    if fmt.lower() not in ("csv", "json"):
        raise DomainError(f"unknown records format {fmt!r}; use csv or json")
    return fmt.lower()


def write_records(records: RunRecords, path: str | Path, fmt: str | None = None) -> Path:
    """Write records as csv or json (default: from the file suffix, csv otherwise)."""
    path = Path(path)
    fmt = _suffix_format(path, fmt)
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "json":
        path.write_text(records.model_dump_json(indent=2))
    else:
        with path.open("w", newline="") as stream:
            writer = csv.writer(stream, lineterminator="\n")
            writer.writerow(RECORD_COLUMNS)
            for row in records.rows:
                writer.writerow([_format(getattr(row, column)) for column in RECORD_COLUMNS])
    logger.info(f"Wrote {len(records.rows)} record rows to {path}")
    return path


def _read_csv(path: Path) -> RunRecords:
    with path.open(newline="") as stream:
        reader = csv.reader(stream)
        header = next(reader, None)
        if header is None or tuple(header) != RECORD_COLUMNS:
            raise RecordsParseError(path, f"header must be {','.join(RECORD_COLUMNS)}, got {header}", line=1)
        rows = []
        for line, fields in enumerate(reader, start=2):
            if not fields:
                continue
            if len(fields) != len(RECORD_COLUMNS):
                raise RecordsParseError(
                    path, f"expected {len(RECORD_COLUMNS)} fields, got {len(fields)}", line=line
                )
            try:
                values = {"step": int(fields[0])}
                values.update({name: float(text) for name, text in zip(RECORD_COLUMNS[1:], fields[1:])})
                rows.append(RecordRow(**values))
            except (ValueError, ValidationError) as e:
                raise RecordsParseError(path, f"malformed row {fields}: {e}", line=line) from e
    try:
        return RunRecords(rows=rows)
    except ValidationError as e:
        raise RecordsParseError(path, str(e)) from e


def load_json(path: Path) -> dict:
    """Parsed JSON document; syntax errors name the line."""
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise RecordsParseError(path, e.msg, line=e.lineno) from e


def read_records(path: str | Path) -> RunRecords:
    """Read records written by write_records; the format follows the suffix."""
    path = Path(path)
    if _suffix_format(path, None) == "csv":
        return _read_csv(path)
    try:
        return RunRecords.model_validate(load_json(path))
    except ValidationError as e:
        raise RecordsParseError(path, str(e)) from e
