"""Reading series files: one value per line, or a CSV column."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import SeriesParseError


@dataclass(frozen=True)
class SeriesFile:
    path: Path
    format: str
    values: np.ndarray

    @property
    def length(self) -> int:
        return int(self.values.size)


def _parse_value(text: str, path, lineno: int) -> float:
    try:
        v = float(text)
    except ValueError:
        raise SeriesParseError(f"{path}:{lineno}: cannot parse {text!r} as a number", line=lineno) from None
    if not math.isfinite(v):
        raise SeriesParseError(f"{path}:{lineno}: non-finite value {text!r}", line=lineno)
    return v


def read_text_column(path) -> SeriesFile:
    """One real per line; blank lines and ``#`` comments are skipped."""
    values = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.split("#", 1)[0].strip()
            if text:
                values.append(_parse_value(text, path, lineno))
    return SeriesFile(Path(path), "one-column-text", np.asarray(values, dtype=float))


def read_csv_column(path, column: str | int) -> SeriesFile:
    """Read one CSV column selected by header name or 0-based index.

    Selecting by name requires a header row. Selecting by index treats a first
    row that does not parse as a header.
    """
    values = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        rows = list(enumerate(reader, start=1))
    if not rows:
        raise SeriesParseError(f"{path}: empty file")
    by_name = not (isinstance(column, int) or str(column).isdigit())
    if by_name:
        header = [h.strip() for h in rows[0][1]]
        if column not in header:
            raise SeriesParseError(f"{path}:1: no column named {column!r} in header {header}", line=1)
        idx = header.index(column)
        rows = rows[1:]
    else:
        idx = int(column)
        first = rows[0][1]
        if idx < len(first):
            try:
                float(first[idx])
            except ValueError:
                rows = rows[1:]
    for lineno, row in rows:
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if row[0].lstrip().startswith("#"):
            continue
        if idx >= len(row):
            raise SeriesParseError(f"{path}:{lineno}: row has no column {idx}", line=lineno)
        values.append(_parse_value(row[idx].strip(), path, lineno))
    return SeriesFile(Path(path), "csv-with-column-selector", np.asarray(values, dtype=float))


def read_series(path, column=None) -> SeriesFile:
    if column is not None:
        return read_csv_column(path, column)
    return read_text_column(path)


def write_series(path, values) -> None:
    # 17 significant digits round-trip every double exactly
    with open(path, "w") as fh:
        for v in np.asarray(values, dtype=float):
            fh.write(f"{v:.17g}\n")
