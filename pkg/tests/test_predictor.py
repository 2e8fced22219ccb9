from __future__ import annotations

import numpy as np
import pytest

from rlspredict.predictor import (
    PredictionTrace,
    PredictorConfig,
    forecast_future,
    run_prediction,
    snapshot_rows,
    trace_rows,
)
from rlspredict.sweep import correlation
from rlspredict.timeseries import PriceSeries, synth_ar

CONSTANT = PriceSeries(np.full(600, 50.0))


def small_config(**kwargs):
    defaults = dict(n_coeffs=4, window=2, lam=0.98, delta=0.01)
    defaults.update(kwargs)
    return PredictorConfig(**defaults)


class TestFraming:
    def test_first_prediction_index_arithmetic(self):
        series = PriceSeries(np.array([1.0, 2.0, 3.0]))
        trace = run_prediction(series, PredictorConfig(1, 1, 0.98, 0.01))
        # first usable day is k = N-1+L = 1, with taps [s(0)] and desired s(1)
        assert trace.first_index == 1
        assert np.array_equal(trace.desired, [2.0, 3.0])
        assert trace.predicted[0] == 0.0  # zero-initialized weights

    def test_first_index_respects_series_start(self):
        series = PriceSeries(np.arange(10.0, 30.0), start_index=100)
        trace = run_prediction(series, small_config())
        assert trace.first_index == 100 + 4 - 1 + 2

    def test_taps_are_delayed_by_window(self):
        # one update: y(k) must be w0-free (zero weights), second update's
        # taps are checked through the batch equivalence elsewhere; here we
        # check the error identity and alignment instead.
        series = PriceSeries(np.arange(1.0, 11.0))
        trace = run_prediction(series, PredictorConfig(2, 3, 0.98, 0.01))
        assert trace.first_index == 4
        assert np.array_equal(trace.desired, series.values[4:])

    def test_series_too_short_names_requirement(self):
        series = PriceSeries(np.ones(5) * 2.0)
        with pytest.raises(ValueError, match=r"required 117"):
            run_prediction(series, PredictorConfig(100, 16, 0.98, 0.01))

    def test_error_is_desired_minus_predicted_exactly(self, rng):
        series = PriceSeries(rng.uniform(20.0, 30.0, 120))
        trace = run_prediction(series, small_config())
        assert np.array_equal(trace.error, trace.desired - trace.predicted)

    def test_deterministic(self):
        series = synth_ar([0.8], 0.2, 300, 5, 40.0)
        config = small_config()
        a = run_prediction(series, config)
        b = run_prediction(series, config)
        assert np.array_equal(a.predicted, b.predicted)
        assert a.first_index == b.first_index


class TestConvergence:
    def test_constant_signal(self):
        trace = run_prediction(CONSTANT, PredictorConfig(100, 16, 0.98, 0.01))
        assert len(trace) >= 300
        assert np.all(np.abs(trace.error[-10:]) / 50.0 < 1e-3)

    def test_constant_signal_small_filter(self):
        trace = run_prediction(CONSTANT, PredictorConfig(3, 5, 0.98, 0.01))
        assert np.all(np.abs(trace.error[-10:]) / 50.0 < 1e-3)

    def test_noiseless_sinusoid(self):
        # period 20 samples, N = 2x period, horizon 1: terminal error under
        # 1% of the unit amplitude
        t = np.arange(2000)
        series = PriceSeries(10.0 + np.sin(2 * np.pi * t / 20))
        trace = run_prediction(series, PredictorConfig(40, 1, 0.98, 0.01))
        assert np.abs(trace.error[-20:]).max() < 0.01

    def test_ar1_short_horizon_beats_long_horizon(self):
        series = synth_ar([0.9], 0.1, 2000, 7, 50.0)

        def tail_correlation(window):
            config = PredictorConfig(4, window, 0.98, 0.01)
            trace = run_prediction(series, config)
            return correlation(trace.predicted[-200:], trace.desired[-200:])

        assert tail_correlation(1) > tail_correlation(20)


class TestSnapshots:
    def test_stride_zero_means_none(self):
        trace = run_prediction(CONSTANT, small_config(snapshot_stride=0))
        assert trace.weight_snapshots is None

    def test_stride_one_snapshots_every_update(self):
        trace = run_prediction(CONSTANT, small_config(snapshot_stride=1))
        assert len(trace.weight_snapshots) == len(trace)
        indices = [i for i, _ in trace.weight_snapshots]
        assert indices[0] == trace.first_index
        assert indices == list(range(trace.first_index, trace.first_index + len(trace)))

    def test_stride_three(self):
        trace = run_prediction(CONSTANT, small_config(snapshot_stride=3))
        assert len(trace.weight_snapshots) == len(trace) // 3
        assert trace.weight_snapshots[0][0] == trace.first_index + 2

    def test_snapshot_rows_shape(self):
        trace = run_prediction(CONSTANT, small_config(snapshot_stride=50))
        header, rows = snapshot_rows(trace)
        assert header == ["index", "w0", "w1", "w2", "w3"]
        assert all(len(r) == 5 for r in rows)

    def test_snapshot_rows_requires_snapshots(self):
        trace = run_prediction(CONSTANT, small_config())
        with pytest.raises(ValueError, match="no weight snapshots"):
            snapshot_rows(trace)


class TestForecast:
    def test_constant_series_forecast_is_flat_at_level(self):
        forecast = forecast_future(CONSTANT, PredictorConfig(100, 16, 0.98, 0.01))
        assert len(forecast) == 16
        assert all(abs(v - 50.0) / 50.0 < 1e-3 for _, v in forecast)
        values = [v for _, v in forecast]
        assert max(values) == min(values)  # bit-identical taps, bit-identical output

    def test_window_one_gives_single_next_day_forecast(self):
        series = synth_ar([0.7], 0.1, 200, 3, 30.0)
        forecast = forecast_future(series, small_config(window=1))
        assert len(forecast) == 1
        assert forecast[0][0] == series.end_index + 1

    def test_indices_cover_window_after_last_day(self):
        series = synth_ar([0.9], 0.1, 400, 11, 50.0)
        forecast = forecast_future(series, small_config(window=16))
        assert [i for i, _ in forecast] == list(
            range(series.end_index + 1, series.end_index + 17)
        )
        assert all(np.isfinite(v) for _, v in forecast)

    def test_matches_manual_dot_product_with_final_weights(self):
        # independent oracle: final snapshot weights applied to the delay
        # lines by hand, reading only observed samples
        series = synth_ar([0.9], 0.1, 300, 13, 50.0)
        config = small_config(n_coeffs=6, window=4, snapshot_stride=1)
        trace = run_prediction(series, config)
        weights = trace.weight_snapshots[-1][1]
        values = series.values
        last = len(values) - 1
        expected = []
        for j in range(1, 5):
            end = last - 4 + j
            taps = values[end - 6 + 1 : end + 1][::-1]
            expected.append(float(weights @ taps))
        got = [v for _, v in forecast_future(series, config)]
        assert got == expected

    def test_truncation_point_does_not_change_frozen_prediction(self):
        # with frozen weights, the prediction for day f depends only on
        # samples up to f - L, so any truncation in [f-L, f-1] that still
        # covers day f gives the identical value
        series = synth_ar([0.9], 0.1, 320, 13, 50.0)
        config = small_config(n_coeffs=6, window=4, snapshot_stride=1)
        trace = run_prediction(series, config)
        weights = trace.weight_snapshots[-1][1]
        f = 310
        seen = set()
        for tau in range(f - 4, f):  # truncation points still forecasting day f
            available = series.values[: tau + 1]
            j = f - tau  # day f is the j-th forecast of the tau-truncated run
            end = tau - 4 + j  # newest tap position, per the forecast framing
            taps = available[end - 6 + 1 : end + 1][::-1]
            seen.add(float(weights @ taps))
        assert len(seen) == 1


class TestConfigValidation:
    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(n_coeffs=0),
            dict(window=0),
            dict(lam=0.0),
            dict(lam=1.0),
            dict(delta=0.0),
            dict(snapshot_stride=-1),
        ],
    )
    def test_bad_parameters(self, kwargs):
        with pytest.raises(ValueError):
            small_config(**kwargs)

    def test_trace_rows_align_with_first_index(self):
        series = PriceSeries(np.arange(1.0, 11.0))
        trace = run_prediction(series, PredictorConfig(2, 3, 0.98, 0.01))
        header, rows = trace_rows(trace)
        assert header == ["index", "desired", "predicted", "error"]
        assert [r[0] for r in rows] == list(range(4, 10))

    def test_trace_array_length_invariant(self):
        with pytest.raises(ValueError, match="equal length"):
            PredictionTrace(0, np.zeros(3), np.zeros(2), np.zeros(3))
