"""Telemetry CSV files.

Layout: a version comment line, a header line, then one row per step.
Numbers are written with 17 significant digits so a file read back
reproduces the in-memory floats exactly.
"""

from __future__ import annotations

import csv
import io

import numpy as np

from .errors import TelemetrySchemaError
from .simulation import TELEMETRY_COLUMNS, Telemetry

__all__ = ["SCHEMA_LINE", "format_csv", "write_csv", "read_csv"]

SCHEMA_LINE = "# quadftc-telemetry v1"


def _fmt(x: float) -> str:
    return format(x, ".17g")


def format_csv(tel: Telemetry) -> str:
    out = io.StringIO()
    out.write(SCHEMA_LINE + "\n")
    out.write(",".join(TELEMETRY_COLUMNS) + "\n")
    clamp_col = len(TELEMETRY_COLUMNS) - 1
    for row in tel.data.tolist():
        cells = [_fmt(v) for v in row[:clamp_col]]
        cells.append("1" if row[clamp_col] else "0")
        out.write(",".join(cells))
        out.write("\n")
    return out.getvalue()


def write_csv(tel: Telemetry, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(format_csv(tel))


def read_csv(path) -> Telemetry:
    """Load a telemetry file, checking the version line and the header."""
    with open(path, encoding="utf-8", newline="") as fh:
        first = fh.readline().rstrip("\r\n")
        if first != SCHEMA_LINE:
            raise TelemetrySchemaError(f"unsupported telemetry version line {first!r}, "
                                       f"expected {SCHEMA_LINE!r}")
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise TelemetrySchemaError("missing header line", missing=TELEMETRY_COLUMNS)
        header = [h.strip() for h in header]
        missing = [c for c in TELEMETRY_COLUMNS if c not in header]
        if missing:
            raise TelemetrySchemaError("missing columns: " + ", ".join(missing), missing=missing)
        if header != list(TELEMETRY_COLUMNS):
            raise TelemetrySchemaError("columns present but not in the v1 order")
        rows = []
        for lineno, row in enumerate(reader, start=3):
            if not row:
                continue
            if len(row) != len(TELEMETRY_COLUMNS):
                raise TelemetrySchemaError(f"line {lineno}: expected {len(TELEMETRY_COLUMNS)} "
                                           f"fields, got {len(row)}")
            try:
                rows.append([float(v) for v in row])
            except ValueError as exc:
                raise TelemetrySchemaError(f"line {lineno}: {exc}") from exc
    if not rows:
        raise TelemetrySchemaError("no data rows")
    return Telemetry(np.array(rows, dtype=float))
