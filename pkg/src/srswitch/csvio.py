"""CSV input/output with reproducible formatting.

Floats are written with 17 significant digits so round-tripping is exact
and repeated runs produce byte-identical files.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import ValidationError

FLOAT_FMT = "%.17g"


def format_float(x: float) -> str:
    return FLOAT_FMT % x


def write_csv(path, header: list[str], rows) -> None:
    path = Path(path)
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(format_float(x) for x in row) + "\n")


def read_csv(path) -> tuple[list[str], np.ndarray]:
    """Header fields and a float matrix (empty files yield a 0-row matrix)."""
    path = Path(path)
    try:
        with open(path) as fh:
            header = fh.readline().strip()
            if not header:
                raise ValidationError(f"{path}: empty CSV")
            fields = header.split(",")
            data = np.loadtxt(fh, delimiter=",", ndmin=2)
    except FileNotFoundError:
        raise ValidationError(f"CSV file not found: {path}") from None
    except ValueError as exc:
        raise ValidationError(f"{path}: malformed CSV ({exc})") from None
    if data.size == 0:
        data = np.empty((0, len(fields)))
    if data.shape[1] != len(fields):
        raise ValidationError(
            f"{path}: {data.shape[1]} columns but {len(fields)} header fields")
    return fields, data
