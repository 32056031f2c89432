"""Deterministic CSV/JSON emission shared by the library and the CLI.

All floats are rendered with 17 significant digits so repeated runs with the
same inputs produce byte-identical files.
"""
from __future__ import annotations

import json
import numbers
from pathlib import Path
from typing import Iterable, Mapping, Sequence

__all__ = ["format_float", "write_csv", "write_json"]


def format_float(value: float) -> str:
    """17-significant-digit decimal rendering (round-trips a double)."""
    return f"{float(value):.17g}"


def _cell(value) -> str:
    if isinstance(value, numbers.Integral):
        return str(int(value))
    return format_float(value)


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_cell(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def write_json(path: str | Path, payload: Mapping) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    Path(path).write_text(text + "\n")
