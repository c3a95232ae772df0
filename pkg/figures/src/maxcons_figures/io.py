"""CSV loading with loud schema validation. Display only: nothing is recomputed."""

from __future__ import annotations

import csv
from pathlib import Path


class FigureError(Exception):
    """Base class for figure-generation errors."""


class MissingInput(FigureError):
    """Input CSV absent or has no data rows."""


class SchemaMismatch(FigureError):
    """Input CSV lacks required columns."""


def load_rows(path: str | Path, required: list[str]) -> list[dict]:
    """Read a CSV into dicts, requiring every named column to exist."""
    path = Path(path)
    if not path.exists():
        raise MissingInput(f"{path}: no such file")
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise MissingInput(f"{path}: empty file")
        missing = [col for col in required if col not in reader.fieldnames]
        if missing:
            raise SchemaMismatch(f"{path}: missing columns {missing}")
        rows = list(reader)
    if not rows:
        raise MissingInput(f"{path}: no data rows")
    return rows


def column(rows: list[dict], name: str, cast=float) -> list:
    return [cast(row[name]) for row in rows]
