"""Exponentially weighted RLS adaptive FIR prediction of price series.

Pipeline: load or synthesize a price series (:mod:`rlspredict.timeseries`),
drive the recursive least-squares engine (:mod:`rlspredict.rls`) through the
L-step-ahead framing (:mod:`rlspredict.predictor`), pick the filter length and
window from the correlation surface (:mod:`rlspredict.sweep`), and evaluate
the forecast-driven trade (:mod:`rlspredict.strategy`). :mod:`rlspredict.cli`
exposes it all as the ``rlspredict`` command.
"""

from .predictor import (
    PredictionTrace,
    PredictorConfig,
    forecast_future,
    run_prediction,
)
from .rls import (
    FilterState,
    RegressionSample,
    SingularSystemError,
    UpdateOutput,
    batch_solve,
    init_filter,
    objective,
    rls_update,
)
from .strategy import (
    BacktestResult,
    TableRow,
    TradePlan,
    backtest,
    plan_trade,
    table_sweep,
)
from .sweep import (
    CorrelationSurface,
    SweepConfig,
    UndefinedCorrelationError,
    correlation,
    profile_by_l,
    profile_by_n,
    sweep_surface,
)
from .timeseries import PriceSeries, load_csv, synth_ar, write_csv

__version__ = "0.1.0"

__all__ = [
    "PriceSeries",
    "load_csv",
    "write_csv",
    "synth_ar",
    "FilterState",
    "RegressionSample",
    "UpdateOutput",
    "SingularSystemError",
    "init_filter",
    "rls_update",
    "batch_solve",
    "objective",
    "PredictorConfig",
    "PredictionTrace",
    "run_prediction",
    "forecast_future",
    "SweepConfig",
    "CorrelationSurface",
    "UndefinedCorrelationError",
    "correlation",
    "sweep_surface",
    "profile_by_n",
    "profile_by_l",
    "TradePlan",
    "BacktestResult",
    "TableRow",
    "plan_trade",
    "backtest",
    "table_sweep",
]
