"""
NUMERICS-001: Finite-difference oracles

Central differences for checking analytic gradients and coupling-layer Jacobians.
"""

from typing import Callable

import numpy as np

from .graph import Parameter


def numerical_gradient(loss_fn: Callable[[], float], param: Parameter, step: float = 1e-5) -> np.ndarray:
    """
    Central-difference gradient of a scalar loss w.r.t. one parameter.

    Args:
        loss_fn: zero-argument callable re-evaluating the loss from current values
        param: parameter to perturb (restored afterwards)
        step: finite-difference step

    Returns:
        Array shaped like param.value
    """
    grad = np.zeros_like(param.value)
    flat = param.value.reshape(-1)
    for i in range(flat.size):
        original = flat[i]
        flat[i] = original + step
        plus = loss_fn()
        flat[i] = original - step
        minus = loss_fn()
        flat[i] = original
        grad.reshape(-1)[i] = (plus - minus) / (2.0 * step)
    return grad


def numerical_jacobian(fn: Callable[[np.ndarray], np.ndarray], x: np.ndarray, step: float = 1e-5) -> np.ndarray:
    """Central-difference Jacobian J[i, j] = d fn(x)_i / d x_j for a 1-D x."""
    x = np.asarray(x, dtype=np.float64)
    columns = []
    for j in range(x.size):
        dx = np.zeros_like(x)
        dx[j] = step
        columns.append((np.asarray(fn(x + dx)) - np.asarray(fn(x - dx))) / (2.0 * step))
    return np.stack(columns, axis=1)


def relative_error(analytic: np.ndarray, numeric: np.ndarray, floor: float = 1e-7) -> float:
    """||a - n|| / max(||a||, ||n||, floor) in the Euclidean norm."""
    analytic = np.asarray(analytic, dtype=np.float64).ravel()
    numeric = np.asarray(numeric, dtype=np.float64).ravel()
    scale = max(np.linalg.norm(analytic), np.linalg.norm(numeric), floor)
    return float(np.linalg.norm(analytic - numeric) / scale)
