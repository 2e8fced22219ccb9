"""Command-line front end.

Subcommands cover every artifact the library computes: prediction traces and
weight-convergence snapshots, future forecasts, the (N, L) correlation surface
with its profiles, single-trade backtests, the design/profit table, and the
synthetic series generator. Output is long-form CSV (or an equivalent JSON
array of row objects) ready for external plotting tools.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from ._csvio import write_rows
from .predictor import (
    PredictorConfig,
    forecast_future,
    forecast_rows,
    run_prediction,
    trace_rows,
    write_snapshots_csv,
)
from .rls import SingularSystemError
from .strategy import (
    TABLE_FORMATS,
    backtest,
    backtest_rows,
    plan_trade,
    table_rows,
    table_sweep,
)
from .sweep import (
    SweepConfig,
    profile_by_l,
    profile_by_n,
    profile_rows,
    surface_rows,
    sweep_surface,
)
from .timeseries import load_csv, series_rows, synth_ar

__all__ = ["build_parser", "parse_args", "execute", "main"]

# Default (N, L) pairs for the `table` subcommand, spanning filter lengths
# 60..100 against windows 15..20.
DEFAULT_TABLE_ROWS: tuple[tuple[int, int], ...] = (
    (60, 20),
    (65, 19),
    (70, 18),
    (75, 17),
    (80, 16),
    (85, 15),
    (90, 16),
    (95, 17),
    (100, 18),
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_DATA = 4
EXIT_NUMERIC = 5

_EPILOG = """\
exit status:
  0  requested computation completed (including a "no trade" outcome)
  2  usage error (unknown flag, out-of-range value, missing input)
  3  input/output failure (missing or unreadable file)
  4  invalid data or unmet precondition (bad CSV row, series too short, ...)
  5  numerical failure (singular system despite regularization)
"""


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return value


def _nonneg_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return value


def _forgetting(text: str) -> float:
    value = float(text)
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"must be in (0, 1), got {text}")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if value <= 0.0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
    return value


def _nonneg_float(text: str) -> float:
    value = float(text)
    if value < 0.0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return value


def _int_range(text: str) -> tuple[int, ...]:
    """Parse ``lo:hi[:step]`` into an inclusive ascending tuple."""
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise argparse.ArgumentTypeError(f"expected lo:hi[:step], got {text!r}")
    try:
        lo, hi = int(parts[0]), int(parts[1])
        step = int(parts[2]) if len(parts) == 3 else 1
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi[:step], got {text!r}") from None
    if step < 1 or lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError(
            f"need 1 <= lo <= hi and step >= 1, got {text!r}"
        )
    return tuple(range(lo, hi + 1, step))


def _nl_pairs(text: str) -> tuple[tuple[int, int], ...]:
    """Parse ``N:L,N:L,...`` design rows."""
    pairs = []
    for chunk in text.split(","):
        parts = chunk.split(":")
        if len(parts) != 2:
            raise argparse.ArgumentTypeError(f"expected N:L pairs, got {chunk!r}")
        try:
            pairs.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected N:L pairs, got {chunk!r}") from None
    return tuple(pairs)


def _column(text: str):
    return int(text) if text.lstrip("+-").isdigit() else text


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rlspredict",
        description=__doc__,
        epilog=_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    out = argparse.ArgumentParser(add_help=False)
    out.add_argument("--output", default="-", help="output path, or - for stdout")
    out.add_argument("--format", choices=("csv", "json"), default="csv")

    inp = argparse.ArgumentParser(add_help=False)
    inp.add_argument("--input", required=True, help="price CSV to load")
    inp.add_argument("--has-header", action="store_true",
                     help="first input row is a header")
    inp.add_argument("--column", type=_column, default=None,
                     help="price column, position or name "
                          "(default: 0, or 'price' with --has-header)")
    inp.add_argument("--date-column", type=_column, default=None,
                     help="optional calendar-date column")

    filt = argparse.ArgumentParser(add_help=False)
    filt.add_argument("--coeffs", type=_positive_int, default=100,
                      help="filter length N (default 100)")
    filt.add_argument("--window", type=_positive_int, default=16,
                      help="prediction window L in trading days (default 16)")
    filt.add_argument("--lambda", dest="lam", type=_forgetting, default=0.98,
                      help="forgetting factor in (0,1) (default 0.98)")
    filt.add_argument("--delta", type=_positive_float, default=0.01,
                      help="inverse-correlation regularization (default 0.01)")

    p = sub.add_parser("predict", parents=[inp, filt, out],
                       help="run the adaptive predictor over the whole series")
    p.add_argument("--snapshot-stride", type=_nonneg_int, default=0,
                   help="snapshot weights every this many updates (0 = off)")
    p.add_argument("--snapshots", default=None,
                   help="write weight snapshots to this CSV "
                        "(implies --snapshot-stride 1 unless set)")
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("forecast", parents=[inp, filt, out],
                       help="train, then forecast the next L days with frozen weights")
    p.set_defaults(func=_cmd_forecast)

    p = sub.add_parser("sweep", parents=[inp, out],
                       help="correlation surface over the (N, L) grid")
    p.add_argument("--n-range", type=_int_range, default=_int_range("5:100:5"),
                   help="filter lengths as lo:hi[:step] (default 5:100:5)")
    p.add_argument("--l-range", type=_int_range, default=_int_range("1:30"),
                   help="windows as lo:hi[:step] (default 1:30)")
    p.add_argument("--lambda", dest="lam", type=_forgetting, default=0.98)
    p.add_argument("--delta", type=_positive_float, default=0.01)
    p.add_argument("--eval-from", type=_nonneg_int, required=True,
                   help="first trading-day index of the correlation window")
    p.add_argument("--eval-to", type=_nonneg_int, required=True,
                   help="last trading-day index of the correlation window")
    p.add_argument("--jobs", type=_positive_int, default=1,
                   help="evaluate grid cells in this many processes")
    p.add_argument("--profile-n", default=None,
                   help="also write the per-N max-correlation profile CSV here")
    p.add_argument("--profile-l", default=None,
                   help="also write the per-L max-correlation profile CSV here")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("backtest", parents=[inp, out],
                       help="plan a trade from a forecast CSV and price it")
    p.add_argument("--forecast", required=True,
                   help="forecast CSV (index,predicted) to plan the trade from")
    p.set_defaults(func=_cmd_backtest)

    p = sub.add_parser("table", parents=[inp, out],
                       help="profit table over (N, L) design rows")
    p.add_argument("--rows", type=_nl_pairs,
                   default=DEFAULT_TABLE_ROWS,
                   help="design rows as N:L,N:L,... (default: the 9 built-in rows)")
    p.add_argument("--anchor", type=_nonneg_int, default=2472,
                   help="last trading-day index used for training (default 2472)")
    p.add_argument("--lambda", dest="lam", type=_forgetting, default=0.98)
    p.add_argument("--delta", type=_positive_float, default=0.01)
    p.set_defaults(func=_cmd_table)

    p = sub.add_parser("synth", parents=[out],
                       help="generate a seeded autoregressive synthetic series")
    p.add_argument("--ar", type=float, action="append", default=None,
                   help="autoregressive coefficient (repeatable, lag order)")
    p.add_argument("--noise", type=_nonneg_float, default=0.0,
                   help="white-noise standard deviation (default 0)")
    p.add_argument("--length", type=_positive_int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--offset", type=float, default=50.0,
                   help="level added to keep prices positive (default 50)")
    p.set_defaults(func=_cmd_synth)

    return parser


def parse_args(argv=None) -> argparse.Namespace:
    """Parse and validate; usage problems exit with status 2 naming the flag."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "sweep" and args.eval_from >= args.eval_to:
        parser.error(
            f"--eval-from must be < --eval-to, got {args.eval_from} and {args.eval_to}"
        )
    return args


def _load_series(args):
    column = args.column
    if column is None:
        column = "price" if args.has_header else 0
    return load_csv(
        args.input,
        column=column,
        has_header=args.has_header,
        date_column=args.date_column,
    )


def _load_forecast(path: str) -> list[tuple[int, float]]:
    """Read a forecast CSV written by the forecast subcommand."""
    out: list[tuple[int, float]] = []
    with Path(path).open("r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None or header[:2] != ["index", "predicted"]:
            raise ValueError(f"{path}: expected header index,predicted")
        for row_number, row in enumerate(reader, start=2):
            try:
                out.append((int(row[0]), float(row[1])))
            except (IndexError, ValueError):
                raise ValueError(
                    f"{path}: row {row_number}: cannot parse forecast row {row!r}"
                ) from None
    if not out:
        raise ValueError(f"{path}: no forecast rows")
    return out


def _emit(header, rows, args, formats=None) -> None:
    if args.format == "json":
        payload = [dict(zip(header, row)) for row in rows]
        if args.output == "-":
            json.dump(payload, sys.stdout, indent=2)
            sys.stdout.write("\n")
        else:
            with Path(args.output).open("w", encoding="utf-8") as handle:
                json.dump(payload, handle, indent=2)
                handle.write("\n")
    else:
        target = sys.stdout if args.output == "-" else args.output
        write_rows(header, rows, target, formats=formats)


def _predictor_config(args, snapshot_stride: int = 0) -> PredictorConfig:
    return PredictorConfig(
        n_coeffs=args.coeffs,
        window=args.window,
        lam=args.lam,
        delta=args.delta,
        snapshot_stride=snapshot_stride,
    )


def _cmd_predict(args) -> int:
    stride = args.snapshot_stride
    if args.snapshots and stride == 0:
        stride = 1
    trace = run_prediction(_load_series(args), _predictor_config(args, stride))
    header, rows = trace_rows(trace)
    _emit(header, rows, args)
    if args.snapshots:
        write_snapshots_csv(trace, args.snapshots)
    return EXIT_OK


def _cmd_forecast(args) -> int:
    forecast = forecast_future(_load_series(args), _predictor_config(args))
    header, rows = forecast_rows(forecast)
    _emit(header, rows, args)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    config = SweepConfig(
        n_values=args.n_range,
        l_values=args.l_range,
        lam=args.lam,
        delta=args.delta,
        eval_from=args.eval_from,
        eval_to=args.eval_to,
    )
    surface = sweep_surface(_load_series(args), config, jobs=args.jobs)
    header, rows = surface_rows(surface)
    _emit(header, rows, args)
    if args.profile_n:
        h, r = profile_rows(profile_by_n(surface), "n")
        write_rows(h, r, args.profile_n)
    if args.profile_l:
        h, r = profile_rows(profile_by_l(surface), "l")
        write_rows(h, r, args.profile_l)
    return EXIT_OK


def _cmd_backtest(args) -> int:
    series = _load_series(args)
    plan = plan_trade(_load_forecast(args.forecast))
    result = backtest(plan, series) if plan is not None else None
    header, rows = backtest_rows(plan, result)
    _emit(header, rows, args, formats=TABLE_FORMATS)
    return EXIT_OK


def _cmd_table(args) -> int:
    rows = table_sweep(
        _load_series(args), args.rows, args.lam, args.delta, args.anchor
    )
    header, cells = table_rows(rows)
    _emit(header, cells, args, formats=TABLE_FORMATS)
    return EXIT_OK


def _cmd_synth(args) -> int:
    series = synth_ar(
        args.ar or [], args.noise, args.length, args.seed, args.offset
    )
    header, rows = series_rows(series)
    _emit(header, rows, args)
    return EXIT_OK


def execute(args: argparse.Namespace) -> int:
    """Dispatch a parsed configuration to its subcommand."""
    return args.func(args)


def main(argv=None) -> int:
    args = parse_args(argv)
    try:
        return execute(args)
    except SingularSystemError as exc:
        print(f"rlspredict: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except FileNotFoundError as exc:
        print(f"rlspredict: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"rlspredict: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"rlspredict: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
