"""Deterministic JSON and CSV emission.

Reports must be byte-identical across runs for the same inputs, so floats
are always rendered with 17 significant digits (round-trip exact for IEEE
doubles), JSON keys are sorted, and newlines are always ``\\n``.
"""

from __future__ import annotations

import json
import math
from typing import Iterable, Sequence

from .errors import ParameterError

__all__ = ["format_float", "json_dumps", "csv_lines"]


def format_float(x: float) -> str:
    if not math.isfinite(x):
        raise ParameterError(f"refusing to serialize non-finite value {x}")
    return format(float(x), ".17g")


def _render(obj) -> str:
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if obj is None:
        return "null"
    if isinstance(obj, dict):
        items = (f"{json.dumps(str(k))}: {_render(v)}" for k, v in sorted(obj.items()))
        return "{" + ", ".join(items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_render(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def json_dumps(obj: dict) -> str:
    """Render a report dict as deterministic JSON (sorted keys, trailing newline)."""
    return _render(obj) + "\n"


def csv_lines(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    """Render simple numeric/boolean rows as CSV text."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_csv_cell(cell) for cell in row))
    return "\n".join(lines) + "\n"


def _csv_cell(cell) -> str:
    if isinstance(cell, bool):
        return "true" if cell else "false"
    if isinstance(cell, float):
        return format_float(cell)
    return str(cell)
