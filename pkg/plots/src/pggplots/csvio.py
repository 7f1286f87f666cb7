"""CSV ingestion with hard schema checks.

The plotting layer consumes the simulation CLI's file formats verbatim
and never recomputes any dynamics; a missing column is a hard error
naming the file and the columns it found.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

__all__ = ["SchemaError", "read_columns"]


class SchemaError(ValueError):
    """Input CSV does not carry the columns the figure needs."""


def read_columns(path: str | Path, required: tuple[str, ...],
                 text_columns: tuple[str, ...] = ()) -> dict:
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file")
        missing = [c for c in required if c not in header]
        if missing:
            raise SchemaError(
                f"{path}: missing column(s) {missing}; found {header}")
        rows = list(reader)
    out = {}
    for name in required:
        idx = header.index(name)
        values = [row[idx] for row in rows]
        if name in text_columns:
            out[name] = values
        else:
            try:
                out[name] = np.array([float(v) for v in values])
            except ValueError as exc:
                raise SchemaError(f"{path}: column {name!r}: {exc}")
    return out
