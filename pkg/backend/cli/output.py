"""Deterministic CSV and JSON artifacts.

Floats are written with repr (shortest round-trip decimal, '.' separator);
mpmath numbers are rounded to double first. JSON keys are sorted.
"""

import csv
import io
import json
import math
import os
import sys
from enum import Enum
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import mpmath


def plain(value):
    """Convert engine values to JSON-ready builtins."""
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, (float, mpmath.mpf)):
        number = float(value)
        return number if math.isfinite(number) else str(number)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {str(key): plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(item) for item in value]
    if hasattr(value, "to_dict"):
        return plain(value.to_dict())
    if hasattr(value, "__float__"):
        return plain(float(value))
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _cell(value) -> str:
    value = plain(value)
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_json(payload) -> str:
    return json.dumps(plain(payload), indent=2, sort_keys=True, allow_nan=False) + "\n"


def render_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(value) for value in row])
    return buffer.getvalue()


def emit(text: str, path: Optional[str] = None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)
