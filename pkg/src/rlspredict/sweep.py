"""Correlation-based design sweep over the (filter length, window) grid.

Each grid cell runs the predictor with its own (N, L) and scores it by the
Pearson correlation between predicted and actual prices over a fixed
evaluation window. Cells where the correlation is undefined (zero variance on
either side) are marked, never silently zeroed. Profiles reduce the surface
to its per-N and per-L maxima, which is what drives the choice of a predictor
configuration.
"""

from __future__ import annotations

import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from ._csvio import write_rows
from .predictor import PredictorConfig, run_prediction
from .timeseries import PriceSeries

__all__ = [
    "UndefinedCorrelationError",
    "SweepConfig",
    "CorrelationSurface",
    "correlation",
    "sweep_surface",
    "profile_by_n",
    "profile_by_l",
    "surface_rows",
    "profile_rows",
    "write_surface_csv",
    "write_profile_csv",
]


class UndefinedCorrelationError(ValueError):
    """Raised when either input has zero variance."""


def correlation(a: Sequence[float], b: Sequence[float]) -> float:
    """Sample Pearson correlation coefficient.

    Numerator and denominator share the same normalization, so the
    (n vs n-1) convention cancels. Inputs of unequal length, length < 2, or
    zero variance are rejected.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError(f"inputs must be equal-length vectors, got {a.shape} and {b.shape}")
    if a.size < 2:
        raise ValueError(f"need at least 2 samples, got {a.size}")
    ac = a - a.mean()
    bc = b - b.mean()
    den = np.sqrt(float(ac @ ac)) * np.sqrt(float(bc @ bc))
    if den == 0.0:
        raise UndefinedCorrelationError("zero variance in at least one input")
    return float(np.clip(float(ac @ bc) / den, -1.0, 1.0))


@dataclass(frozen=True)
class SweepConfig:
    """Grid axes, shared RLS parameters, and the correlation window."""

    n_values: tuple[int, ...]
    l_values: tuple[int, ...]
    lam: float = 0.98
    delta: float = 0.01
    eval_from: int = 0
    eval_to: int = 0

    def __post_init__(self) -> None:
        n_values = tuple(int(n) for n in self.n_values)
        l_values = tuple(int(l) for l in self.l_values)
        if not n_values or not l_values:
            raise ValueError("n_values and l_values must be non-empty")
        if any(b <= a for a, b in zip(n_values, n_values[1:])):
            raise ValueError(f"n_values must be strictly ascending: {n_values}")
        if any(b <= a for a, b in zip(l_values, l_values[1:])):
            raise ValueError(f"l_values must be strictly ascending: {l_values}")
        if self.eval_from >= self.eval_to:
            raise ValueError(
                f"eval_from must be < eval_to, got [{self.eval_from}, {self.eval_to}]"
            )
        object.__setattr__(self, "n_values", n_values)
        object.__setattr__(self, "l_values", l_values)


@dataclass(frozen=True, eq=False)
class CorrelationSurface:
    """Correlations indexed by (N, L); NaN cells are the undefined marker."""

    n_values: tuple[int, ...]
    l_values: tuple[int, ...]
    values: np.ndarray  # shape (len(n_values), len(l_values))

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        if values.shape != (len(self.n_values), len(self.l_values)):
            raise ValueError(
                f"values shape {values.shape} does not match axes "
                f"({len(self.n_values)}, {len(self.l_values)})"
            )
        object.__setattr__(self, "values", values)

    def is_defined(self, i: int, j: int) -> bool:
        return bool(np.isfinite(self.values[i, j]))

    def cell(self, i: int, j: int) -> float | None:
        """Correlation at row i, column j, or None when undefined."""
        return float(self.values[i, j]) if self.is_defined(i, j) else None


def _evaluate_cell(
    series: PriceSeries, n: int, l: int, config: SweepConfig
) -> float:
    """One grid cell; NaN marks an undefined correlation."""
    try:
        trace = run_prediction(
            series, PredictorConfig(n_coeffs=n, window=l, lam=config.lam, delta=config.delta)
        )
    except ValueError as exc:
        raise ValueError(f"sweep cell (N={n}, L={l}): {exc}") from exc
    lo = config.eval_from - trace.first_index
    hi = config.eval_to - trace.first_index
    if lo < 0 or hi >= len(trace):
        raise ValueError(
            f"sweep cell (N={n}, L={l}): evaluation window "
            f"[{config.eval_from}, {config.eval_to}] not covered by trace "
            f"[{trace.first_index}, {trace.last_index}]"
        )
    try:
        return correlation(trace.predicted[lo : hi + 1], trace.desired[lo : hi + 1])
    except UndefinedCorrelationError:
        return float("nan")


def _cell_worker(args) -> float:
    return _evaluate_cell(*args)


def sweep_surface(
    series: PriceSeries, config: SweepConfig, jobs: int = 1
) -> CorrelationSurface:
    """Evaluate the full (N, L) grid.

    Cells are independent; with ``jobs > 1`` they are evaluated in a process
    pool. The surface is assembled in grid order either way, so the result is
    deterministic regardless of scheduling.
    """
    grid = [(series, n, l, config) for n in config.n_values for l in config.l_values]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            flat = list(pool.map(_cell_worker, grid, chunksize=1))
    else:
        flat = [_evaluate_cell(*args) for args in grid]
    values = np.array(flat).reshape(len(config.n_values), len(config.l_values))
    return CorrelationSurface(config.n_values, config.l_values, values)


def _profile(
    axis: tuple[int, ...], rows: np.ndarray
) -> list[tuple[int, float | None]]:
    out: list[tuple[int, float | None]] = []
    for value, row in zip(axis, rows):
        defined = row[np.isfinite(row)]
        out.append((value, float(defined.max()) if defined.size else None))
    return out


def profile_by_n(surface: CorrelationSurface) -> list[tuple[int, float | None]]:
    """Per-N maximum correlation over defined L cells (None if a row has none)."""
    return _profile(surface.n_values, surface.values)


def profile_by_l(surface: CorrelationSurface) -> list[tuple[int, float | None]]:
    """Per-L maximum correlation over defined N cells (None if a column has none)."""
    return _profile(surface.l_values, surface.values.T)


def surface_rows(surface: CorrelationSurface) -> tuple[list[str], list[list]]:
    """Long-form ``n,l,correlation`` rows; undefined cells export as empty."""
    header = ["n", "l", "correlation"]
    rows = []
    for i, n in enumerate(surface.n_values):
        for j, l in enumerate(surface.l_values):
            rows.append([n, l, surface.cell(i, j)])
    return header, rows


def profile_rows(
    profile: list[tuple[int, float | None]], axis_name: str
) -> tuple[list[str], list[list]]:
    header = [axis_name, "max_correlation"]
    return header, [[axis, value] for axis, value in profile]


def write_surface_csv(
    surface: CorrelationSurface, target: str | Path | io.TextIOBase
) -> None:
    header, rows = surface_rows(surface)
    write_rows(header, rows, target)


def write_profile_csv(
    profile: list[tuple[int, float | None]],
    axis_name: str,
    target: str | Path | io.TextIOBase,
) -> None:
    header, rows = profile_rows(profile, axis_name)
    write_rows(header, rows, target)
