"""
EVAL-001: Scenario generation

generate_scenarios pushes m latent draws z ~ N(0, I) through the inverse flow
for one (raw kW) history and maps the result back to kW with the training
standardization.
"""

from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from ..data_001 import Standardizer
from ..flow_001 import FlowModel, sample
from ...utils.errors import DimensionMismatchError, InputError, NonFiniteError


@dataclass
class ScenarioSet:
    """m trajectories x k hours (kW) for one conditioning history"""

    values: np.ndarray
    history: np.ndarray
    seed: int = 0
    method: str = "flow"
    window_id: int = 0
    latents: Optional[np.ndarray] = None

    def __post_init__(self):
        self.values = np.atleast_2d(np.asarray(self.values, dtype=np.float64))
        self.history = np.asarray(self.history, dtype=np.float64)
        if self.values.shape[0] < 1:
            raise InputError("scenario set is empty")
        if not np.all(np.isfinite(self.values)):
            bad = int(np.argwhere(~np.isfinite(self.values))[0][0])
            raise NonFiniteError(f"non-finite value in scenario {bad} of window {self.window_id}", index=bad)

    @property
    def m(self) -> int:
        return self.values.shape[0]

    @property
    def k(self) -> int:
        return self.values.shape[1]

    def reported(self) -> np.ndarray:
        """Values floored at 0 kW, for export and plots only."""
        return np.maximum(self.values, 0.0)


def generate_scenarios(
    model: FlowModel,
    history,
    m: int = 100,
    seed: int = 0,
    standardizer: Optional[Standardizer] = None,
    window_id: int = 0,
    allow_untrained: bool = False,
) -> ScenarioSet:
    """
    Draw m conditional scenarios for one history.

    Args:
        model: trained FlowModel
        history: Array[h] in kW (model space when standardizer is None)
        m: number of scenarios
        seed: latent-draw seed
        standardizer: training standardization (None means identity)
        window_id: id carried into the ScenarioSet
        allow_untrained: permit an untrained model (tests, demos)

    Returns:
        ScenarioSet of de-standardized trajectories

    Raises:
        InputError: untrained model, m < 1 or wrong history length
    """
    if not (model.trained or allow_untrained):
        raise InputError("model is untrained; train it or load a checkpoint first")
    if m < 1:
        raise InputError(f"number of scenarios must be >= 1, got {m}")
    history = np.asarray(history, dtype=np.float64)
    if history.shape != (model.cond_dim,):
        raise DimensionMismatchError(
            f"history must have length {model.cond_dim}, got shape {history.shape}"
        )

    condition = standardizer.transform_past(history) if standardizer else history
    z = np.random.default_rng(seed).standard_normal((m, model.dim))
    x = sample(model, condition, z)
    values = standardizer.inverse_future(x) if standardizer else x
    return ScenarioSet(values, history, seed=seed, window_id=window_id, latents=z)


def condition_sensitivity(
    model: FlowModel,
    history,
    standardizer: Optional[Standardizer] = None,
    noise_scale: float = 0.5,
    m: int = 100,
    seed: int = 0,
) -> Dict[str, float]:
    """
    Compare scenario medians for a history and a noise-corrupted copy.

    A model that ignores its condition gives nearly identical medians; the
    numbers are reported, not judged.

    Returns:
        Dict with mean / max absolute median shift (kW) and the corruption size
    """
    history = np.asarray(history, dtype=np.float64)
    rng = np.random.default_rng(seed)
    corruption = noise_scale * (np.std(history) or 1.0) * rng.standard_normal(history.shape)
    noisy = np.maximum(history + corruption, 0.0)

    clean = generate_scenarios(model, history, m, seed, standardizer, allow_untrained=True)
    shifted = generate_scenarios(model, noisy, m, seed, standardizer, allow_untrained=True)
    shift = np.abs(np.median(clean.values, axis=0) - np.median(shifted.values, axis=0))
    return {
        "history_perturbation": float(np.mean(np.abs(noisy - history))),
        "mean_median_shift": float(np.mean(shift)),
        "max_median_shift": float(np.max(shift)),
    }
