"""Versioned CSV schemas shared by the benchmark harness and the figure
pipeline.  Every file starts with the marker line ``# stickywave-csv v1``
followed by a standard header row; floats are rendered with repr precision
so identical runs produce byte-identical files.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path

__all__ = [
    "VERSION_LINE",
    "SCHEMAS",
    "write_csv",
    "read_csv",
]

VERSION_LINE = "# stickywave-csv v1"

SCHEMAS = {
    "records": ("n", "delta", "t", "l1_error", "wall_seconds"),
    "slopes": ("t", "slope"),
    "field_scalar": ("t", "x", "value"),
    "field_psystem": ("t", "x", "wminus", "wplus", "u", "v"),
    "trajectory": ("t", "type", "k", "x"),
    "events": ("event_index", "time", "alpha", "i", "beta", "j"),
    "quantize": ("measure", "n", "w1"),
    "tail_fits": ("measure", "slope"),
}


def _fmt(value):
    if isinstance(value, float):
        value = float(value)  # numpy scalars repr differently
        if math.isinf(value):
            return "inf"
        return repr(value)
    return str(value)


def write_csv(path, schema, rows):
    """Write rows (iterables matching the named schema) to ``path``."""
    header = SCHEMAS[schema]
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(VERSION_LINE + "\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            if len(row) != len(header):
                raise ValueError(f"row arity {len(row)} != schema {schema}")
            writer.writerow([_fmt(v) for v in row])
    return path


def read_csv(path):
    """Read a versioned CSV; returns (header, rows of strings)."""
    with open(path, newline="") as fh:
        first = fh.readline().rstrip("\n")
        if first != VERSION_LINE:
            raise ValueError(f"{path}: missing version line {VERSION_LINE!r}")
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ValueError(f"{path}: missing header row")
        return tuple(header), [tuple(r) for r in reader]
