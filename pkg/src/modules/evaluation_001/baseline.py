"""
EVAL-001: AR(24) + Gaussian-noise baseline

Least-squares autoregression of y_t on (y_{t-1}, ..., y_{t-24}) plus an
intercept, forecast recursively k hours ahead; scenarios add N(0, sigma^2)
residual noise to the point forecast. One set of m noise draws is shared by
all hours, each hour taking its own permutation of it, so every hour has the
same empirical noise quantiles and the PI width profile is flat.
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .scenarios import ScenarioSet
from ...utils.errors import InputError

AR_ORDER = 24
RIDGE_LAMBDA = 1e-8
# normal equations beyond this condition number are treated as singular
SINGULAR_CONDITION = 1e12


@dataclass
class ARBaseline:
    """Fitted AR coefficients (lag 1 first), intercept and residual std"""

    coefficients: np.ndarray
    intercept: float
    sigma: float
    ridge_fallback: bool = False

    @property
    def order(self) -> int:
        return self.coefficients.shape[0]

    def forecast(self, history, k: int) -> np.ndarray:
        """Recursive k-step point forecast from the last `order` values of history."""
        history = np.asarray(history, dtype=np.float64)
        if history.shape[0] < self.order:
            raise InputError(f"AR forecast needs {self.order} history values, got {history.shape[0]}")
        lags = list(history[-self.order:][::-1])
        out = np.empty(k)
        for step in range(k):
            value = self.intercept + float(np.dot(self.coefficients, lags))
            out[step] = value
            lags = [value] + lags[:-1]
        return out


def ar_fit(
    series,
    order: int = AR_ORDER,
    callback: Optional[Callable[[str], None]] = None,
) -> ARBaseline:
    """
    Fit the autoregression by least squares on a training series.

    Args:
        series: 1-D training load (kW)
        order: number of lags
        callback: Optional logging function (ridge fallback warning)

    Returns:
        ARBaseline

    Raises:
        InputError: series shorter than 2 * order
    """
    log = callback or (lambda x: None)
    y = np.asarray(series, dtype=np.float64).ravel()
    if y.shape[0] < 2 * order:
        raise InputError(f"AR({order}) fit needs at least {2 * order} values, got {y.shape[0]}")

    n = y.shape[0] - order
    lags = np.column_stack([y[order - lag : order - lag + n] for lag in range(1, order + 1)])
    design = np.column_stack([lags, np.ones(n)])
    target = y[order:]

    gram = design.T @ design
    rhs = design.T @ target
    ridge = False
    try:
        if np.linalg.cond(gram) > SINGULAR_CONDITION:
            raise np.linalg.LinAlgError("ill-conditioned normal equations")
        beta = np.linalg.solve(gram, rhs)
    except np.linalg.LinAlgError:
        ridge = True
        beta = np.linalg.solve(gram + RIDGE_LAMBDA * np.eye(gram.shape[0]), rhs)
        log(f"⚠ AR({order}) normal equations singular; using ridge fallback (lambda={RIDGE_LAMBDA:g})")

    residuals = target - design @ beta
    return ARBaseline(
        coefficients=beta[:order],
        intercept=float(beta[order]),
        sigma=float(np.sqrt(np.mean(residuals ** 2))),
        ridge_fallback=ridge,
    )


def ar_scenarios(
    baseline: ARBaseline, history, k: int = 24, m: int = 100, seed: int = 0, window_id: int = 0
) -> ScenarioSet:
    """Point forecast plus N(0, sigma^2) noise per hour, m times (hour-permuted draws)."""
    if m < 1:
        raise InputError(f"number of scenarios must be >= 1, got {m}")
    point = baseline.forecast(history, k)
    rng = np.random.default_rng(seed)
    draws = rng.standard_normal(m)
    noise = baseline.sigma * rng.permuted(np.tile(draws, (k, 1)), axis=1).T
    return ScenarioSet(point[None, :] + noise, np.asarray(history, dtype=np.float64),
                       seed=seed, method="ar-noise", window_id=window_id)
