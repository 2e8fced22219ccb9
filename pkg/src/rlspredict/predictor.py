"""Frame a price series as an L-step-ahead FIR prediction problem.

The filter input at day k is the tapped delay line of raw prices delayed by
the prediction window L: x = [s(k-L), s(k-L-1), ..., s(k-L-N+1)], with the
desired response d = s(k). Driving the recursion over the whole history in
ascending k yields the prediction trace; freezing the final weights and
sliding the delay line past the end of the data yields an L-day forecast that
reads only observed samples.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._csvio import write_rows
from .rls import FilterState, RegressionSample, init_filter, rls_update
from .timeseries import PriceSeries

__all__ = [
    "PredictorConfig",
    "PredictionTrace",
    "run_prediction",
    "forecast_future",
    "trace_rows",
    "snapshot_rows",
    "forecast_rows",
    "write_trace_csv",
    "write_snapshots_csv",
]


@dataclass(frozen=True)
class PredictorConfig:
    """Filter length, prediction window (trading days), and RLS parameters."""

    n_coeffs: int = 100
    window: int = 16
    lam: float = 0.98
    delta: float = 0.01
    snapshot_stride: int = 0  # 0 = no weight snapshots

    def __post_init__(self) -> None:
        if self.n_coeffs < 1:
            raise ValueError(f"n_coeffs must be >= 1, got {self.n_coeffs}")
        if self.window < 1:
            raise ValueError(f"window must be >= 1, got {self.window}")
        if not 0.0 < self.lam < 1.0:
            raise ValueError(f"forgetting factor must be in (0, 1), got {self.lam}")
        if self.delta <= 0.0:
            raise ValueError(f"delta must be > 0, got {self.delta}")
        if self.snapshot_stride < 0:
            raise ValueError(
                f"snapshot_stride must be >= 0, got {self.snapshot_stride}"
            )

    def min_series_length(self) -> int:
        return self.n_coeffs + self.window + 1


@dataclass(frozen=True, eq=False)
class PredictionTrace:
    """Per-day desired value, filter output, and a priori error.

    ``first_index`` is the trading-day index of the first prediction; entry j
    of each array belongs to day ``first_index + j``. ``weight_snapshots``
    holds (day index, weight vector) pairs when snapshotting was enabled.
    """

    first_index: int
    desired: np.ndarray
    predicted: np.ndarray
    error: np.ndarray
    weight_snapshots: tuple[tuple[int, np.ndarray], ...] | None = None

    def __post_init__(self) -> None:
        if not len(self.desired) == len(self.predicted) == len(self.error):
            raise ValueError("trace arrays must have equal length")

    def __len__(self) -> int:
        return int(len(self.desired))

    @property
    def last_index(self) -> int:
        return self.first_index + len(self) - 1


def _check_length(series: PriceSeries, config: PredictorConfig) -> None:
    needed = config.min_series_length()
    if len(series) < needed:
        raise ValueError(
            f"series length {len(series)} < required {needed} "
            f"(n_coeffs + window + 1 = {config.n_coeffs} + {config.window} + 1)"
        )


def _drive(
    series: PriceSeries, config: PredictorConfig
) -> tuple[PredictionTrace, FilterState]:
    """Run the recursion over the whole series; also return the final state."""
    _check_length(series, config)
    values = series.values
    n, window = config.n_coeffs, config.window
    state = init_filter(n, config.lam, config.delta)

    start = n - 1 + window  # first position with a full, L-delayed tap vector
    count = len(values) - start
    desired = np.empty(count)
    predicted = np.empty(count)
    error = np.empty(count)
    snapshots: list[tuple[int, np.ndarray]] = []

    for j, k in enumerate(range(start, len(values))):
        taps = values[k - window - n + 1 : k - window + 1][::-1]  # newest first
        state, out = rls_update(state, RegressionSample(taps, values[k]))
        desired[j] = values[k]
        predicted[j] = out.output
        error[j] = out.prior_error
        if config.snapshot_stride > 0 and (j + 1) % config.snapshot_stride == 0:
            snapshots.append((series.start_index + k, state.weights))

    trace = PredictionTrace(
        first_index=series.start_index + start,
        desired=desired,
        predicted=predicted,
        error=error,
        weight_snapshots=tuple(snapshots) if config.snapshot_stride > 0 else None,
    )
    return trace, state


def run_prediction(series: PriceSeries, config: PredictorConfig) -> PredictionTrace:
    """Drive the RLS recursion over the full series, one update per day.

    Predictions before the first complete delay line are not emitted; the
    trace starts at trading-day index ``start_index + n_coeffs - 1 + window``.
    """
    trace, _ = _drive(series, config)
    return trace


def forecast_future(
    series: PriceSeries, config: PredictorConfig
) -> list[tuple[int, float]]:
    """Forecast the ``window`` days after the last observed day.

    Trains over the whole series first, then applies the final weights with no
    further adaptation: the forecast for day t + j uses the delay line ending
    at observed day t - window + j, so only observed data is read.
    """
    _, state = _drive(series, config)
    values = series.values
    n, window = config.n_coeffs, config.window
    weights = state.weights
    last = len(values) - 1

    out: list[tuple[int, float]] = []
    for j in range(1, window + 1):
        end = last - window + j
        taps = values[end - n + 1 : end + 1][::-1]
        out.append(
            (series.start_index + last + j, float(weights @ taps))
        )
    return out


def trace_rows(trace: PredictionTrace) -> tuple[list[str], list[list]]:
    header = ["index", "desired", "predicted", "error"]
    rows = [
        [trace.first_index + j, float(trace.desired[j]), float(trace.predicted[j]),
         float(trace.error[j])]
        for j in range(len(trace))
    ]
    return header, rows


def snapshot_rows(trace: PredictionTrace) -> tuple[list[str], list[list]]:
    if not trace.weight_snapshots:
        raise ValueError("trace has no weight snapshots (snapshot_stride was 0)")
    n = len(trace.weight_snapshots[0][1])
    header = ["index"] + [f"w{i}" for i in range(n)]
    rows = [
        [index] + [float(w) for w in weights]
        for index, weights in trace.weight_snapshots
    ]
    return header, rows


def forecast_rows(forecast: list[tuple[int, float]]) -> tuple[list[str], list[list]]:
    header = ["index", "predicted"]
    return header, [[index, float(value)] for index, value in forecast]


def write_trace_csv(trace: PredictionTrace, target: str | Path | io.TextIOBase) -> None:
    """Export ``index,desired,predicted,error``."""
    header, rows = trace_rows(trace)
    write_rows(header, rows, target)


def write_snapshots_csv(
    trace: PredictionTrace, target: str | Path | io.TextIOBase
) -> None:
    """Export the weight snapshots as ``index,w0,w1,...``."""
    header, rows = snapshot_rows(trace)
    write_rows(header, rows, target)
