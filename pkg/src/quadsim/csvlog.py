"""CSV serialization of run logs.

Floats are written with ``repr`` (shortest round-trip form), so a
write/read cycle is lossless.
"""
import numpy as np

from .errors import SchemaMismatch
from .harness import COLUMNS, TimeSeriesLog

HEADER = ",".join(COLUMNS)


def write_csv(log_: TimeSeriesLog, path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(HEADER + "\n")
        for row in log_.data.tolist():
            fh.write(",".join(map(repr, row)) + "\n")


def read_csv(path) -> TimeSeriesLog:
    with open(path, encoding="utf-8", newline="") as fh:
        header = fh.readline().rstrip("\r\n")
        if header.split(",") != list(COLUMNS):
            missing = [c for c in COLUMNS if c not in header.split(",")]
            raise SchemaMismatch(f"{path}: header does not match; missing {missing}")
        rows = []
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\r\n")
            if not line:
                continue
            fields = line.split(",")
            if len(fields) != len(COLUMNS):
                raise SchemaMismatch(f"{path}:{lineno}: expected {len(COLUMNS)} fields, got {len(fields)}")
            try:
                rows.append([float(v) for v in fields])
            except ValueError as exc:
                raise SchemaMismatch(f"{path}:{lineno}: {exc}") from None
    data = np.array(rows, dtype=float).reshape(-1, len(COLUMNS))
    return TimeSeriesLog(data)
