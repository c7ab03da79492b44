"""Reading run files: comma-delimited text, header row, one file per run."""

import csv
import math
from pathlib import Path

import numpy as np

from .core import TimeSeries
from .errors import DataError, EmptyFile, MissingColumn, ParseError


def read_header(path):
    with open(path, newline="") as fh:
        row = next(csv.reader(fh), None)
    if not row:
        raise EmptyFile(f"{path}: file is empty")
    return [c.strip() for c in row]


def load_column(path, column):
    """Values of one named column as a float array.

    Rows are numbered from 1 for the first data row (the header is row 0).
    """
    path = str(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header:
            raise EmptyFile(f"{path}: file is empty")
        header = [c.strip() for c in header]
        if column not in header:
            raise MissingColumn(path, column)
        j = header.index(column)
        values = []
        for i, row in enumerate(reader, start=1):
            if not row:
                continue
            if len(row) != len(header):
                raise ParseError(path, i, column, f"<{len(row)} fields, header has {len(header)}>")
            text = row[j].strip()
            try:
                v = float(text)
            except ValueError:
                raise ParseError(path, i, column, text) from None
            if not math.isfinite(v):
                raise ParseError(path, i, column, text)
            values.append(v)
    if not values:
        raise EmptyFile(f"{path}: header but no data rows")
    return np.asarray(values, dtype=np.float64)


def load_runs(paths, sensor):
    """One :class:`TimeSeries` per file for ``sensor``, in the given order.

    The run id is the file stem.
    """
    out = []
    for p in paths:
        p = Path(p)
        if not p.is_file():
            raise DataError(f"{p}: no such file")
        out.append(TimeSeries(p.stem, load_column(p, sensor), sensor))
    return out


def sensor_columns(path, skip=("t", "time", "timestamp")):
    """Header columns other than a leading time column."""
    return [c for c in read_header(path) if c.lower() not in skip]
