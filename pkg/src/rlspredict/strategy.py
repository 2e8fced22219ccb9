"""Buy-then-sell trade planning on a forecast, and its evaluation.

Trade rule: buy at the forecast's minimum (earliest on ties), sell at the
maximum strictly after it (earliest on ties). The rule depends only on the
ordering of predicted prices, so it is invariant under positive affine
transforms of the forecast. A forecast whose minimum is its last point admits
no sell day; that is a first-class "no trade" outcome, not an error.

One round trip per evaluation window, long only, no transaction costs.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from ._csvio import write_rows
from .predictor import PredictorConfig, forecast_future
from .timeseries import PriceSeries, sig6

__all__ = [
    "TradePlan",
    "BacktestResult",
    "TableRow",
    "plan_trade",
    "backtest",
    "table_sweep",
    "backtest_rows",
    "table_rows",
    "write_table_csv",
]

TABLE_FORMATS = {"profit_pct": ".2f"}


@dataclass(frozen=True)
class TradePlan:
    """Buy/sell trading-day indices plus a descriptor of the forecast run."""

    buy_index: int
    sell_index: int
    source: str = ""

    def __post_init__(self) -> None:
        if self.buy_index >= self.sell_index:
            raise ValueError(
                f"buy index {self.buy_index} must precede sell index {self.sell_index}"
            )


@dataclass(frozen=True)
class BacktestResult:
    """Realized prices and percent profit for a trade plan."""

    plan: TradePlan
    buy_price: float
    sell_price: float
    profit_pct: float

    def __post_init__(self) -> None:
        if self.buy_price <= 0 or self.sell_price <= 0:
            raise ValueError("prices must be positive")
        expected = 100.0 * (self.sell_price - self.buy_price) / self.buy_price
        if self.profit_pct != expected:
            raise ValueError(
                f"profit_pct {self.profit_pct} does not recompute from prices "
                f"({expected})"
            )


def plan_trade(
    forecast: Sequence[tuple[int, float]], source: str = ""
) -> TradePlan | None:
    """Plan a buy-then-sell trade from a forecast segment.

    Returns None ("no trade") when no day follows the forecast minimum, which
    happens exactly when the minimum sits on the last day (for instance on a
    monotone-decreasing forecast).
    """
    if len(forecast) < 2:
        raise ValueError(f"forecast must have at least 2 points, got {len(forecast)}")
    prices = [price for _, price in forecast]
    buy_pos = min(range(len(prices)), key=lambda i: (prices[i], i))
    after = range(buy_pos + 1, len(prices))
    if not after:
        return None
    sell_pos = max(after, key=lambda i: (prices[i], -i))
    return TradePlan(
        buy_index=forecast[buy_pos][0],
        sell_index=forecast[sell_pos][0],
        source=source,
    )


def backtest(plan: TradePlan, actual: PriceSeries) -> BacktestResult:
    """Evaluate a plan against actual prices.

    Profit is stored at full precision; exports round to 2 decimals.
    """
    buy_price = actual.price_at(plan.buy_index)
    sell_price = actual.price_at(plan.sell_index)
    return BacktestResult(
        plan=plan,
        buy_price=buy_price,
        sell_price=sell_price,
        profit_pct=100.0 * (sell_price - buy_price) / buy_price,
    )


@dataclass(frozen=True)
class TableRow:
    """One design-table row: a (N, L) pair with its plan and outcome.

    ``plan`` is None for a "no trade" forecast; ``error`` records a per-row
    failure without aborting the rest of the table.
    """

    n: int
    l: int
    plan: TradePlan | None = None
    result: BacktestResult | None = None
    error: str | None = None

    @property
    def status(self) -> str:
        if self.error is not None:
            return f"error: {self.error}"
        return "ok" if self.plan is not None else "no-trade"


def table_sweep(
    series: PriceSeries,
    rows: Sequence[tuple[int, int]],
    lam: float,
    delta: float,
    forecast_anchor: int,
) -> list[TableRow]:
    """Run the (N, L) design table against one price history.

    ``forecast_anchor`` is the last trading-day index used for training; each
    row trains on the series up to the anchor, forecasts the following L days,
    plans the trade on the forecast, and backtests the plan against the actual
    series. Row failures are recorded in the row.
    """
    out: list[TableRow] = []
    for n, l in rows:
        try:
            trained = series.slice(series.start_index, forecast_anchor)
            config = PredictorConfig(n_coeffs=n, window=l, lam=lam, delta=delta)
            source = (
                f"N={n},L={l},lam={lam},"
                f"window={forecast_anchor + 1}..{forecast_anchor + l}"
            )
            plan = plan_trade(forecast_future(trained, config), source=source)
            if plan is None:
                out.append(TableRow(n=n, l=l))
            else:
                out.append(TableRow(n=n, l=l, plan=plan, result=backtest(plan, series)))
        except (ValueError, ArithmeticError) as exc:
            out.append(TableRow(n=n, l=l, error=str(exc)))
    return out


def _outcome_cells(plan: TradePlan | None, result: BacktestResult | None) -> list:
    if plan is None or result is None:
        return [None, None, None, None, None]
    return [
        plan.buy_index,
        plan.sell_index,
        sig6(result.buy_price),
        sig6(result.sell_price),
        round(result.profit_pct, 2),
    ]


def backtest_rows(
    plan: TradePlan | None, result: BacktestResult | None
) -> tuple[list[str], list[list]]:
    """Single-plan export; a None plan emits the explicit no-trade marker row."""
    header = ["buy_index", "sell_index", "buy_price", "sell_price", "profit_pct",
              "status"]
    status = "ok" if plan is not None else "no-trade"
    return header, [_outcome_cells(plan, result) + [status]]


def table_rows(rows: Sequence[TableRow]) -> tuple[list[str], list[list]]:
    """Design-table export, one row per (N, L) pair, in input order."""
    header = ["n", "l", "buy_index", "sell_index", "buy_price", "sell_price",
              "profit_pct", "status"]
    out = []
    for row in rows:
        out.append([row.n, row.l] + _outcome_cells(row.plan, row.result) + [row.status])
    return header, out


def write_table_csv(
    rows: Sequence[TableRow], target: str | Path | io.TextIOBase
) -> None:
    header, cells = table_rows(rows)
    write_rows(header, cells, target, formats=TABLE_FORMATS)
