"""Exponentially weighted least-squares engine.

Three routes to the same minimizer:

* :func:`rls_update` — the O(N^2)-per-step recursion on the inverse of the
  regularized weighted input-correlation matrix,
* :func:`batch_solve` — the direct dense solution of the weighted normal
  equations (the oracle the recursion is tested against),
* :func:`objective` — evaluation of the exponentially weighted squared-error
  cost a weight vector achieves on a sample history.

Weighting convention: the error at sample i of a k-sample history carries the
factor lam**(k - i), so recent samples dominate and the effective memory is
about 1/(1 - lam) samples.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "FilterState",
    "RegressionSample",
    "UpdateOutput",
    "SingularSystemError",
    "init_filter",
    "rls_update",
    "batch_solve",
    "objective",
]


class SingularSystemError(ArithmeticError):
    """Normal equations singular even after regularization (needs delta > 0)."""


@dataclass(frozen=True, eq=False)
class FilterState:
    """Weight vector plus the inverse regularized correlation matrix.

    Treated as immutable: :func:`rls_update` returns a fresh state rather than
    mutating, so a state may be handed between tasks freely.
    """

    weights: np.ndarray
    inv_corr: np.ndarray
    lam: float
    delta: float
    samples_seen: int = 0

    def __post_init__(self) -> None:
        weights = np.asarray(self.weights, dtype=np.float64)
        inv_corr = np.asarray(self.inv_corr, dtype=np.float64)
        if weights.ndim != 1 or weights.size < 1:
            raise ValueError("weights must be a vector of length >= 1")
        if inv_corr.shape != (weights.size, weights.size):
            raise ValueError(
                f"inv_corr shape {inv_corr.shape} does not match "
                f"{weights.size} weights"
            )
        if not 0.0 < self.lam < 1.0:
            raise ValueError(f"forgetting factor must be in (0, 1), got {self.lam}")
        if self.delta <= 0.0:
            raise ValueError(f"delta must be > 0, got {self.delta}")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "inv_corr", inv_corr)

    @property
    def n_coeffs(self) -> int:
        return int(self.weights.size)


@dataclass(frozen=True, eq=False)
class RegressionSample:
    """One (input vector, desired response) pair."""

    input: np.ndarray
    desired: float

    def __post_init__(self) -> None:
        x = np.asarray(self.input, dtype=np.float64)
        if x.ndim != 1:
            raise ValueError("sample input must be a vector")
        if not np.all(np.isfinite(x)):
            raise ValueError("sample input contains non-finite values")
        if not np.isfinite(self.desired):
            raise ValueError("desired value is non-finite")
        object.__setattr__(self, "input", x)
        object.__setattr__(self, "desired", float(self.desired))


@dataclass(frozen=True)
class UpdateOutput:
    """Filter output y and a priori error e = d - y (pre-update weights)."""

    output: float
    prior_error: float


def init_filter(n_coeffs: int, lam: float, delta: float) -> FilterState:
    """Fresh state: zero weights, inv_corr = (1/delta) * I, no samples seen."""
    if n_coeffs < 1:
        raise ValueError(f"n_coeffs must be >= 1, got {n_coeffs}")
    return FilterState(
        weights=np.zeros(n_coeffs),
        inv_corr=np.eye(n_coeffs) / delta,
        lam=lam,
        delta=delta,
        samples_seen=0,
    )


def rls_update(
    state: FilterState, sample: RegressionSample
) -> tuple[FilterState, UpdateOutput]:
    """One exponentially weighted recursive least-squares step.

    Returns the new state together with the filter output and the a priori
    error, both computed with the weights from before the update.
    """
    x = sample.input
    if x.size != state.n_coeffs:
        raise ValueError(
            f"sample input length {x.size} != filter length {state.n_coeffs}"
        )
    lam = state.lam
    y = float(state.weights @ x)
    e = sample.desired - y

    px = state.inv_corr @ x
    gain = px / (lam + float(x @ px))
    weights = state.weights + gain * e
    # rank-1 downdate of the inverse; re-symmetrize to bound drift over long runs
    inv_corr = (state.inv_corr - np.outer(gain, px)) / lam
    inv_corr = (inv_corr + inv_corr.T) / 2.0

    new_state = FilterState(
        weights=weights,
        inv_corr=inv_corr,
        lam=lam,
        delta=state.delta,
        samples_seen=state.samples_seen + 1,
    )
    return new_state, UpdateOutput(output=y, prior_error=e)


def _stack_history(
    history: Sequence[RegressionSample],
) -> tuple[np.ndarray, np.ndarray]:
    if len(history) == 0:
        raise ValueError("history must be non-empty")
    n = history[0].input.size
    for i, sample in enumerate(history):
        if sample.input.size != n:
            raise ValueError(
                f"history sample {i} has input length {sample.input.size}, "
                f"expected {n}"
            )
    inputs = np.stack([s.input for s in history])
    desired = np.array([s.desired for s in history])
    return inputs, desired


def batch_solve(
    history: Sequence[RegressionSample], lam: float, delta: float
) -> np.ndarray:
    """Directly solve the weighted, regularized normal equations.

    Solves (sum_i lam**(k-i) x_i x_i^T + lam**(k+1) delta I) w =
    sum_i lam**(k-i) x_i d_i with a dense solver. The decayed delta term makes
    this the exact fixed point of the recursion started from
    :func:`init_filter`, so the two agree up to floating-point error.
    """
    if not 0.0 < lam <= 1.0:
        raise ValueError(f"forgetting factor must be in (0, 1], got {lam}")
    if delta <= 0.0:
        raise ValueError(f"delta must be > 0, got {delta}")
    inputs, desired = _stack_history(history)
    k = len(history) - 1
    w_exp = lam ** np.arange(k, -1, -1, dtype=np.float64)

    a = (inputs * w_exp[:, None]).T @ inputs
    a += lam ** (k + 1) * delta * np.eye(inputs.shape[1])
    b = inputs.T @ (w_exp * desired)
    try:
        return np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(
            f"normal equations singular despite regularization: {exc}"
        ) from exc


def objective(
    history: Sequence[RegressionSample], weights: np.ndarray, lam: float
) -> float:
    """Exponentially weighted sum of squared errors of ``weights`` on ``history``."""
    if not 0.0 < lam <= 1.0:
        raise ValueError(f"forgetting factor must be in (0, 1], got {lam}")
    inputs, desired = _stack_history(history)
    weights = np.asarray(weights, dtype=np.float64)
    if weights.size != inputs.shape[1]:
        raise ValueError(
            f"weights length {weights.size} != input dimension {inputs.shape[1]}"
        )
    k = len(history) - 1
    w_exp = lam ** np.arange(k, -1, -1, dtype=np.float64)
    errors = desired - inputs @ weights
    return float(w_exp @ (errors * errors))
