"""Shared CSV rendering for the row-based exports.

Cells are plain Python values: int, float, str, or None (empty field). Floats
render via repr, the shortest string that parses back to the same value, so
re-loading an export loses nothing.
"""

from __future__ import annotations

import csv
from pathlib import Path

__all__ = ["render_cell", "write_rows"]


def render_cell(value, fmt: str | None = None) -> str:
    if value is None:
        return ""
    if fmt is not None and isinstance(value, float):
        return format(value, fmt)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_rows(
    header: list[str],
    rows: list[list],
    target,
    formats: dict[str, str] | None = None,
) -> None:
    """Write header + rows as CSV to a path or open text handle.

    ``formats`` maps column names to float format specs (e.g. ``".2f"``) for
    columns with a documented fixed precision.
    """
    specs = [formats.get(name) if formats else None for name in header]

    def _write(handle) -> None:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(
                [render_cell(cell, spec) for cell, spec in zip(row, specs)]
            )

    if isinstance(target, (str, Path)):
        with Path(target).open("w", encoding="utf-8", newline="") as handle:
            _write(handle)
    else:
        _write(target)
