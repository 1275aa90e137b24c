"""Strict CSV reading with line-numbered errors."""

from __future__ import annotations

import csv
from pathlib import Path


class CSVFormatError(ValueError):
    def __init__(self, path, line: int, message: str):
        self.path = str(path)
        self.line = line
        super().__init__(f"{path}:{line}: {message}")


def read_table(path: Path, required: list[str], text_columns: tuple[str, ...] = ()) -> list[dict]:
    """Rows of ``path`` as dicts; every required column is parsed as float unless listed in ``text_columns``."""
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise CSVFormatError(path, 1, "empty file") from None
        missing = [c for c in required if c not in header]
        if missing:
            raise CSVFormatError(path, 1, f"missing columns {missing}")
        rows = []
        for line_no, raw in enumerate(reader, start=2):
            if not raw:
                continue
            if len(raw) != len(header):
                raise CSVFormatError(path, line_no, f"expected {len(header)} fields, got {len(raw)}")
            row = dict(zip(header, raw))
            for col in header:
                if col in text_columns:
                    continue
                try:
                    row[col] = float(row[col])
                except ValueError:
                    raise CSVFormatError(path, line_no, f"column {col!r}: not a number: {row[col]!r}") from None
            rows.append(row)
    return rows
