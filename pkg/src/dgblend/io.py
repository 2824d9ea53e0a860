"""Atomic CSV output with a leading schema comment line."""

from __future__ import annotations

import csv
import os
import tempfile
from pathlib import Path


def write_csv_atomic(path, header, rows, schema: str) -> Path:
    """Write ``# schema`` + header + rows to ``path`` via a temp file and rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="", encoding="utf-8") as fh:
            fh.write(f"# {schema}\n")
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def read_csv(path) -> tuple[str, list[str], list[list[str]]]:
    """Return ``(schema, header, rows)`` of a file written by :func:`write_csv_atomic`."""
    with open(path, newline="", encoding="utf-8") as fh:
        first = fh.readline()
        schema = first[1:].strip() if first.startswith("#") else ""
        if not first.startswith("#"):
            fh.seek(0)
        reader = csv.reader(fh)
        header = next(reader)
        return schema, header, [row for row in reader]
