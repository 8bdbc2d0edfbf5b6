"""Flat run-record loading and selection for the figure scripts.

Records arrive as comma-separated text files with a header row, the
format the gap-lab command line tool appends to.  This module never
imports that tool; the record files are the only interface.  Loading
validates up front that every column a figure kind consumes is present
and reports all missing columns by name in one message.  Cells hold
strings; the empty string marks a null.
"""

from __future__ import annotations

import csv


class SchemaError(Exception):
    """A record file lacks required columns or has no header at all."""


class SelectionError(Exception):
    """No records remain to plot after filtering."""


# Columns each figure kind reads.  Files may carry more; extras are
# ignored so the record schema can grow without breaking older plots.
REQUIRED_COLUMNS = {
    "gap-sweep": ("n", "gamma", "pattern", "delta", "stderr"),
    "scaling": ("n", "gamma", "pattern", "delta", "stderr"),
    "orbits": ("n", "gate_set", "orbit_index", "value"),
    "weights": ("n", "gamma", "pattern", "weight", "value"),
}


def load_records(paths, kind):
    """Read record files for a figure kind.

    Returns (rows, columns) where rows is a list of dicts and columns is
    the header of the first file.  Raises SchemaError naming every
    missing required column, or the file that has no header row.
    """
    required = REQUIRED_COLUMNS[kind]
    rows = []
    columns = None
    for path in paths:
        with open(path, encoding="utf-8", newline="") as handle:
            reader = csv.DictReader(handle)
            if reader.fieldnames is None:
                raise SchemaError(f"{path}: empty file, expected a header row")
            missing = [name for name in required if name not in reader.fieldnames]
            if missing:
                raise SchemaError(
                    f"{path}: missing required columns for kind "
                    f"{kind!r}: {', '.join(missing)}"
                )
            if columns is None:
                columns = tuple(reader.fieldnames)
            rows.extend(reader)
    return rows, columns


def apply_selection(rows, columns, selects):
    """Filter rows by exact column=value matches.

    Filtering on a column absent from the header is a schema error with
    the column named; an empty result is a selection error.
    """
    for key, value in selects:
        if key not in columns:
            raise SchemaError(
                f"selection column {key!r} not in record header "
                f"(have: {', '.join(columns)})"
            )
        rows = [row for row in rows if row.get(key) == value]
    if not rows:
        raise SelectionError("no records remain after selection")
    return rows


def numeric(row, key):
    """Float value of a cell, or None when the cell is null."""
    text = row.get(key, "")
    if text == "":
        return None
    return float(text)
