"""Price series container, CSV ingestion/emission, and a seeded AR generator.

The trading-day index convention used across the package lives here: samples
are indexed by a plain 0-based integer counting exchange opening days from the
first sample. Calendar dates, when available, ride along as labels and never
enter any computation.

Input CSV: UTF-8, comma separated, optional header, decimal point, one price
per row in a configurable column. Output CSV: header ``index,price[,date]``
with prices at 6 significant digits.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._csvio import write_rows

__all__ = [
    "PriceSeries",
    "load_csv",
    "write_csv",
    "series_rows",
    "synth_ar",
    "sig6",
]


def sig6(x: float) -> float:
    """Quantize to the 6 significant digits used by the price CSV format."""
    return float(f"{x:.6g}")


@dataclass(frozen=True, eq=False)
class PriceSeries:
    """Ordered closing prices indexed by trading-day index.

    ``values`` must be finite and strictly positive; ``labels``, when present,
    carries one calendar-date string per sample. Instances are immutable and
    safe to share between tasks.
    """

    values: np.ndarray
    start_index: int = 0
    labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 1:
            raise ValueError("price series must be one-dimensional")
        if values.size < 1:
            raise ValueError("price series must contain at least one sample")
        if not np.all(np.isfinite(values)):
            raise ValueError("price series contains non-finite values")
        if np.any(values <= 0.0):
            raise ValueError("price series contains non-positive values")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "start_index", int(self.start_index))
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != values.size:
                raise ValueError(
                    f"labels length {len(labels)} != values length {values.size}"
                )
            object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return int(self.values.size)

    @property
    def end_index(self) -> int:
        """Trading-day index of the last sample (inclusive)."""
        return self.start_index + len(self) - 1

    def price_at(self, index: int) -> float:
        """Price at a trading-day index."""
        if not self.start_index <= index <= self.end_index:
            raise ValueError(
                f"index {index} outside series range "
                f"[{self.start_index}, {self.end_index}]"
            )
        return float(self.values[index - self.start_index])

    def slice(self, from_index: int, to_index: int) -> "PriceSeries":
        """Inclusive sub-series by trading-day indices.

        The result keeps the global index convention: its ``start_index`` is
        ``from_index``, so slicing twice equals slicing once.
        """
        if not self.start_index <= from_index <= to_index <= self.end_index:
            raise ValueError(
                f"slice [{from_index}, {to_index}] outside series range "
                f"[{self.start_index}, {self.end_index}]"
            )
        lo = from_index - self.start_index
        hi = to_index - self.start_index + 1
        labels = self.labels[lo:hi] if self.labels is not None else None
        return PriceSeries(self.values[lo:hi].copy(), from_index, labels)


def _resolve_column(column: int | str, header: list[str] | None, what: str) -> int:
    if isinstance(column, int):
        return column
    if header is None:
        raise ValueError(
            f"{what} given by name {column!r} requires a header row"
        )
    try:
        return header.index(column)
    except ValueError:
        raise ValueError(f"no column named {column!r} in header {header}") from None


def load_csv(
    path: str | Path,
    column: int | str = 0,
    has_header: bool = False,
    date_column: int | str | None = None,
) -> PriceSeries:
    """Load a price series from a CSV file.

    Parameters
    ----------
    path : str or Path
        File to read.
    column : int or str
        Price column, as a 0-based position or (with ``has_header``) a name.
    has_header : bool
        Whether the first row is a header.
    date_column : int or str, optional
        Column carrying calendar-date labels.

    Rows that fail to parse are reported with their 1-based file row number.
    Blank rows are hard errors: silently skipping them would corrupt the
    delay line downstream.
    """
    path = Path(path)
    with path.open("r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header: list[str] | None = None
        first_data_row = 1
        if has_header:
            header = next(reader, None)
            if header is None:
                raise ValueError(f"{path}: empty file, expected a header row")
            header = [h.strip() for h in header]
            first_data_row = 2
        price_pos = _resolve_column(column, header, "price column")
        date_pos = (
            _resolve_column(date_column, header, "date column")
            if date_column is not None
            else None
        )

        values: list[float] = []
        labels: list[str] = []
        for row_number, row in enumerate(reader, start=first_data_row):
            if not row or all(cell.strip() == "" for cell in row):
                raise ValueError(f"{path}: blank row {row_number}")
            try:
                price = float(row[price_pos])
            except IndexError:
                raise ValueError(
                    f"{path}: row {row_number} has no column {price_pos}"
                ) from None
            except ValueError:
                raise ValueError(
                    f"{path}: row {row_number}: cannot parse price "
                    f"{row[price_pos]!r}"
                ) from None
            if not np.isfinite(price):
                raise ValueError(f"{path}: row {row_number}: non-finite price")
            if price <= 0.0:
                raise ValueError(
                    f"{path}: row {row_number}: non-positive price {price}"
                )
            values.append(price)
            if date_pos is not None:
                try:
                    labels.append(row[date_pos].strip())
                except IndexError:
                    raise ValueError(
                        f"{path}: row {row_number} has no column {date_pos}"
                    ) from None

    if not values:
        raise ValueError(f"{path}: no data rows")
    return PriceSeries(
        np.asarray(values), 0, tuple(labels) if date_pos is not None else None
    )


def series_rows(series: PriceSeries) -> tuple[list[str], list[list]]:
    """Header and rows for the ``index,price[,date]`` export."""
    with_dates = series.labels is not None
    header = ["index", "price", "date"] if with_dates else ["index", "price"]
    rows = []
    for i, value in enumerate(series.values):
        row: list = [series.start_index + i, sig6(float(value))]
        if with_dates:
            row.append(series.labels[i])
        rows.append(row)
    return header, rows


def write_csv(series: PriceSeries, target: str | Path | io.TextIOBase) -> None:
    """Write a price series as ``index,price[,date]`` CSV, 6 significant digits."""
    header, rows = series_rows(series)
    write_rows(header, rows, target)


def synth_ar(
    order_coeffs,
    noise_std: float,
    length: int,
    seed: int,
    offset: float,
) -> PriceSeries:
    """Generate a synthetic price series from an autoregressive recurrence.

    The zero-mean process x(t) = sum_j a_j * x(t-j) + eps(t) is started from
    zeros and shifted by ``offset``; eps is Gaussian white noise with standard
    deviation ``noise_std``. Output is a pure function of the arguments
    (bit-identical for a fixed seed).

    The autoregressive polynomial is assumed stable; that is the caller's
    responsibility and is not verified. A run whose values do not stay
    strictly positive is rejected (signals that ``offset`` is too small).
    """
    coeffs = np.asarray(order_coeffs, dtype=np.float64)
    if length < 1:
        raise ValueError(f"length must be >= 1, got {length}")
    if noise_std < 0:
        raise ValueError(f"noise_std must be >= 0, got {noise_std}")
    rng = np.random.default_rng(seed)
    noise = rng.normal(0.0, noise_std, size=length)
    x = np.zeros(length)
    order = coeffs.size
    for t in range(length):
        acc = noise[t]
        for j in range(1, min(order, t) + 1):
            acc += coeffs[j - 1] * x[t - j]
        x[t] = acc
    values = x + offset
    if np.any(values <= 0.0):
        raise ValueError(
            "generated series is not strictly positive; increase offset"
        )
    return PriceSeries(values)
